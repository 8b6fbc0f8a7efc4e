//! Cycle sets and contraction bounds for a few parameter pairs.

use consecutive_happy::map::{contraction_bound, cycle_set};
use consecutive_happy::Params;

fn main() -> consecutive_happy::Result<()> {
    for (e, b) in [(2, 10), (3, 10), (2, 16), (3, 14), (2, 2)] {
        let params = Params::new(e, b)?;
        let set = cycle_set(&params)?;
        println!(
            "{params}: contraction bound {}, {} values on cycles",
            contraction_bound(&params)?,
            set.len()
        );
        for cycle in set.cycles() {
            let shown: Vec<String> = cycle.iter().map(u64::to_string).collect();
            println!("  {}", shown.join(" -> "));
        }
    }
    Ok(())
}
