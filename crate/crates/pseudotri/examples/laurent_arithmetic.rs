//! Exact Laurent polynomial arithmetic with big integer coefficients.

use pseudotri::LaurentPoly;

fn main() {
    let names = vec!["x".to_string(), "y".into(), "z".into()];
    let p = |s: &str| LaurentPoly::parse(s, &names).unwrap();
    let f = &(&p("x + y") * &p("z + 1")) * &p("x^-1*y^-1*z^-1");
    println!("f = {}", f.to_string_with(&names));
    println!("  = {}", f.to_fraction_string(&names));
    println!("denominator vector {:?}", f.denominator_vector().unwrap());
    let g = f.pow(30);
    let biggest = g.terms().map(|(_, c)| c.bits()).max().unwrap();
    println!("f^30 has {} terms, largest coefficient {} bits", g.len(), biggest);
    println!("f^30 / f^29 == f: {}", g.div_exact(&f.pow(29)).unwrap() == f);
    println!("{}", serde_json::to_string(&f.to_json(&names)).unwrap());
}
