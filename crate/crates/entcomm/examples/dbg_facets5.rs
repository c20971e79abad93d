use entcomm::classical::{enumerate_vertices, verify_facet, DParam, FacetInequality};
fn main() {
    let v33 = enumerate_vertices(3, 3, DParam::Symbolic).unwrap();
    let v34 = enumerate_vertices(3, 4, DParam::Symbolic).unwrap();
    println!("(3,3): {} vertices, (3,4): {}", v33.len(), v34.len());
    let f33 = [
        ("p(2|1)+p(1|3)+p(3|1) <= 3D", FacetInequality::from_cells(3, 3, &[(2,1),(1,3),(3,1)], 3)),
        ("p(2|1)+p(1|3)+p(3|2) <= 3D", FacetInequality::from_cells(3, 3, &[(2,1),(1,3),(3,2)], 3)),
    ];
    for (name, f) in &f33 {
        println!("(3,3) {name}: {:?}", verify_facet(f, &v33));
    }
    let f34 = [
        ("+p(4|3)", FacetInequality::from_cells(4, 3, &[(2,1),(1,3),(3,1),(4,3)], 3)),
        ("+p(4|2)", FacetInequality::from_cells(4, 3, &[(2,1),(1,3),(3,1),(4,2)], 3)),
        ("+p(4|1)", FacetInequality::from_cells(4, 3, &[(2,1),(1,3),(3,1),(4,1)], 3)),
    ];
    for (name, f) in &f34 {
        println!("(3,4) {name}: {:?}", verify_facet(f, &v34));
    }
    // spec example: p(1|1) <= 1 valid but not a facet on (3,3)
    let mut coeffs = vec![vec![0i64; 3]; 3];
    coeffs[0][0] = 1;
    let triv = FacetInequality { coeffs, rhs_slope: 0, rhs_const: 1 };
    println!("(3,3) p(1|1) <= 1: {:?}", verify_facet(&triv, &v33));
}
