//! Bounded amalgamation checks: the Γ counterexample to AEP, a graph span,
//! and the strict-amalgamation failure of linear orders.

use ultralab::amalgamation::{check_aep, check_ap, check_strict, default_bound, gamma, gamma_instance, spans};
use ultralab::structure::Class;

fn main() -> ultralab::Result<()> {
    let class = Class::age_of(gamma())?;
    let v = check_aep(&class, &gamma_instance(), 4)?;
    println!("age(Γ), AEP at bound 4: {:?}", v.outcome);

    let graphs = Class::graphs();
    let span = spans(&graphs, 2)?.into_iter().last().unwrap();
    let v = check_ap(&graphs, &span, default_bound(&span.b1, &span.b2))?;
    println!("graphs, AP on a span of two 2-vertex graphs: {:?}", v.outcome);
    if let Some(w) = &v.witness {
        println!("  amalgam: {}", w.structure("C").to_json());
    }

    let orders = Class::linear_orders();
    for span in spans(&orders, 2)? {
        let v = check_strict(&orders, &span, default_bound(&span.b1, &span.b2))?;
        println!("linear orders, strict AP with |B1|={} |B2|={}: {:?}", span.b1.size(), span.b2.size(), v.outcome);
    }
    Ok(())
}
