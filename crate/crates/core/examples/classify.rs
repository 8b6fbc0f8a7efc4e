//! Trajectories of the digit power map.
//!
//! cargo run --example classify -- 2 10 4 7 44488

use consecutive_happy::map::{trajectory, Terminal};
use consecutive_happy::Params;

fn main() -> consecutive_happy::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let (e, b, ns) = match args.as_slice() {
        [e, b, rest @ ..] if !rest.is_empty() => (*e as u32, *b, rest.to_vec()),
        _ => (2, 10, vec![4, 7, 44488, 44489]),
    };
    let params = Params::new(e, b)?;
    for n in ns {
        let tr = trajectory(n, &params)?;
        let path: Vec<String> = tr.steps.iter().map(u64::to_string).collect();
        let tail = match tr.terminal {
            Terminal::ReachedOne => "happy".to_string(),
            Terminal::EnteredCycle { entry } => format!("unhappy, cycles through {entry}"),
        };
        println!("{n}: {} -> {}  ({tail})", n, path.join(" -> "));
    }
    Ok(())
}
