//! The standard and word representations of the Rado graph, the map Ω and
//! extension-property witnesses in both.

use ultralab::rado::words::witness_recipe;
use ultralab::rado::{free_witness, least_witness, omega_std, omega_word, phi, section_std, std_edge, word_edge, Hf, Word};
use ultralab::Budget;

fn main() -> ultralab::Result<()> {
    println!("φ(0..10): {:?}", (0..10).map(phi).collect::<Vec<_>>());
    println!("std edges of 5: {:?}", (0..16).filter(|&m| m != 5 && std_edge(5, m)).collect::<Vec<_>>());
    println!("Ω on 0..16: {:?}", (0..16).map(omega_std).collect::<Vec<_>>());
    for c in 0..5 {
        println!("σ({c}) = {}", section_std(c));
    }

    let a = [Hf::from_u64(1), Hf::from_u64(4)];
    let b = [Hf::from_u64(2)];
    println!("std witness adjacent to 1,4 and not 2: {}", free_witness(&a, &b, &[])?);

    let v: Word = "1".parse()?;
    let w: Word = "0110".parse()?;
    println!("word edge 1 ~ 0110: {}, Ω(0110) = {}", word_edge(&v, &w), omega_word(&w));
    let adj = ["e".parse()?, "1".parse()?];
    let non = ["0".parse()?];
    println!("word witness recipe: {}", witness_recipe(&adj, &non, 0)?);
    println!("least word witness: {}", least_witness(&adj, &non, 0, &mut Budget::new(1_000_000))?);
    Ok(())
}
