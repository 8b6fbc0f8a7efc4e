//! Which (e, b) admit consecutive happy numbers at all.
//!
//! When a prime p divides b - 1 and p - 1 divides e - 1, T preserves n mod p,
//! so every happy number is 1 mod p and no two are adjacent.

use consecutive_happy::map::{condition_holds, residue_invariance_witness, Condition};
use consecutive_happy::Params;

fn main() -> consecutive_happy::Result<()> {
    for e in 2..=5u32 {
        let mut row = format!("e={e}:");
        for b in 2..=16u64 {
            let params = Params::new(e, b)?;
            row.push_str(match condition_holds(&params) {
                Condition::Holds => "  .",
                Condition::Fails { .. } => "  x",
            });
        }
        println!("{row}");
    }
    println!(
        "     {}",
        (2..=16).map(|b| format!("{b:>3}")).collect::<String>()
    );

    let params = Params::new(3, 10)?;
    if let Condition::Fails { prime } = condition_holds(&params) {
        let ok = residue_invariance_witness(&params, prime, 10_000)?;
        println!("{params}: T(n) = n mod {prime} for all n <= 10^4: {ok}");
    }
    Ok(())
}
