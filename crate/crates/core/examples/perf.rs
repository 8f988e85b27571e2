use shiftlab::angle::Angle;
use shiftlab::monodromy::track;
use std::time::Instant;

fn main() {
    let t: Angle = "1/12".parse().unwrap();
    let t0 = Instant::now();
    let r = track(&t, 6).unwrap();
    println!("track depth 6: {:?} orbits {}", t0.elapsed(), r.orbits.len());
}
