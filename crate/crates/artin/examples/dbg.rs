use std::time::Instant;
fn main() {
    let t0 = Instant::now();
    let s = artin::densities::artin_constant(7).unwrap();
    println!("artin_constant(7) = {s} in {:?}", t0.elapsed());
}
