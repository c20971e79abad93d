use entcomm::classical::{enumerate_vertices, DParam};
use std::time::Instant;
fn main() {
    for (nx, nz) in [(3usize, 3usize), (3, 4)] {
        let t0 = Instant::now();
        let v = enumerate_vertices(nx, nz, DParam::Symbolic).unwrap();
        println!("({nx},{nz}): {} vertices in {:.1?}", v.len(), t0.elapsed());
    }
}
