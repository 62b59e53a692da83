use tdl_core::budget::Budget;
use tdl_core::digraph::GraphKind;
use tdl_core::extremal::{exact_extremal, ExtremalOptions};
use tdl_core::structure::stability_sweep;
use tdl_core::containment::transitive_blowup_pattern;
use tdl_core::WeightParam;

fn main() {
    let a2 = WeightParam::digraph_counting();
    let t0 = std::time::Instant::now();
    let res = stability_sweep(5, 2, 1, &a2, 1.0, GraphKind::Digraph, &Budget::unlimited()).unwrap();
    println!("sweep n=5 in {:?}", t0.elapsed());
    print!("{}", res.to_csv());
    let t32 = transitive_blowup_pattern(2, 2).unwrap();
    let t0 = std::time::Instant::now();
    let cert = exact_extremal(6, t32.h(), "T_3^2", &a2, GraphKind::Digraph, &ExtremalOptions::default()).unwrap();
    println!("ex_2(6, T_3^2) = {} witnesses={} unique={} labelled={} in {:?}",
        cert.value, cert.witnesses.len(), cert.unique_up_to_iso, cert.labelled_maximizer_count, t0.elapsed());
    for w in &cert.witnesses { println!("  {w}"); }
}
