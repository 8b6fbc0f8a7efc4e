//! Cover values: h with h + x happy for every x on a cycle.

use consecutive_happy::constructor::{describe, Goal};
use consecutive_happy::map::cycle_set;
use consecutive_happy::search::find_cover_h;
use consecutive_happy::{verify_certificate, Constructor, ConstructorConfig, Params};

fn main() -> consecutive_happy::Result<()> {
    for (e, b) in [(2, 10), (2, 16), (3, 14)] {
        let params = Params::new(e, b)?;
        let members = cycle_set(&params)?.members_vec();
        match find_cover_h(&params, &members, 1_000_000, 4)? {
            Some(h) => println!("{params}: least cover {h}"),
            None => {
                let ctor = Constructor::new(params, ConstructorConfig::default())?;
                let cert = ctor.certify_cover()?;
                let Goal::CoverWitness { value, .. } = &cert.goal else {
                    unreachable!()
                };
                println!(
                    "{params}: no cover below 10^6 for {} members; constructed {} ({})",
                    members.len(),
                    describe(ctor.sym(), value),
                    verify_certificate(&cert)
                );
            }
        }
    }
    Ok(())
}
