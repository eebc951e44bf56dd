//! The lexicographic powers of ℚ as a cochain of linear orders, and the
//! ultrametric value of `x ≤ y`.

use ultralab::linorder::{lex_branch, order_value, project, rat};

fn main() -> ultralab::Result<()> {
    let x = lex_branch(&[rat(1, 2), rat(3, 1)])?;
    let y = lex_branch(&[rat(1, 2), rat(-1, 3)])?;
    println!("value of x ≤ y: {}", order_value(&x, &y, 3)?);
    println!("value of y ≤ x: {}", order_value(&y, &x, 3)?);
    let p: Vec<String> = project(&[rat(1, 2), rat(3, 1)])?.iter().map(|q| q.to_string()).collect();
    println!("projection of (1/2, 3): ({})", p.join(", "));
    Ok(())
}
