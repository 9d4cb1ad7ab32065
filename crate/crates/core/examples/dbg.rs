use ncrat::matrixkit::factor::sourour_factor;
use ncrat::matrixkit::similarity::similarity_onto;
use ncrat::ncexpr::parse;
use ncrat::waring::{DecomposeOptions};
use ncrat::witness::{find_distinct_eigs, SearchConfig};
use ncrat::{Matrix, Rat, Cx, Field};
use rand::SeedableRng;

fn main() {
    let f = parse("x1^2", 1).unwrap();
    let seed = 3u64 ^ 0xaaaa;
    let m = Matrix::<Rat>::diagonal(&[Rat::int(1), Rat::int(2), Rat::int(3), Rat::int(4)]);
    // mimic product_three: h witness
    let cfg = SearchConfig::default();
    let h_cert = find_distinct_eigs(&f, 4, &cfg, seed).unwrap();
    println!("A1 norm {:.3e}, trial {}", h_cert.value.norm_inf(), h_cert.trial);
    let t = m.mul(&h_cert.value.inverse().unwrap());
    println!("T norm {:.3e} det {:?}", t.norm_inf(), t.det().magnitude());
    // f witness inside product_two
    let f_cert = find_distinct_eigs(&f, 4, &cfg, seed ^ 0x1bee).unwrap();
    println!("B = f(X1) norm {:.3e} spectrum rational: {}", f_cert.value.norm_inf(), f_cert.rational_spectrum().is_some());
    let beta: Vec<Cx> = f_cert.chi.roots_approx().unwrap().into_iter().map(Cx).collect();
    println!("beta: {:?}", beta.iter().map(|b| b.magnitude()).collect::<Vec<_>>());
    let s2 = t.det() * f_cert.value.det().recip().unwrap();
    println!("s2 = {:.3e}", s2.magnitude());
    // fake gamma: roots of a random conjugated tuple? just test sourour conditioning with wide beta and tiny gamma
    let gamma: Vec<Cx> = (0..4).map(|i| Cx::new(0.1 + 0.2*i as f64, 0.3 - 0.1*i as f64)).collect();
    let prod: Cx = beta.iter().chain(&gamma).fold(Cx::new(1.0,0.0), |a, b| a * *b);
    let tc = t.to_cx();
    let det_t = tc.det();
    // scale gamma to match det exactly
    let corr = det_t / prod;
    let mut gamma = gamma;
    gamma[3] = gamma[3] * corr;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let (n1, n2) = sourour_factor(&tc, &beta, &gamma, &mut rng).unwrap();
    let resid = n1.mul(&n2).sub(&tc).norm_inf() / (1.0 + tc.norm_inf());
    println!("sourour residual {:.3e},  |N1| {:.3e} |N2| {:.3e}", resid, n1.norm_inf(), n2.norm_inf());
    let p1 = similarity_onto(&n1, &f_cert.value.to_cx()).unwrap();
    let p1_inv = p1.inverse().unwrap();
    let re = p1.mul(&f_cert.value.to_cx()).mul(&p1_inv).sub(&n1).norm_inf();
    println!("conjugation residual {:.3e}, |P1| {:.3e} |P1^-1| {:.3e}", re, p1.norm_inf(), p1_inv.norm_inf());
}
