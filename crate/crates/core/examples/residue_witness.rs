//! Happy numbers in prescribed residue classes, searched or constructed.

use consecutive_happy::constructor::{describe, Goal};
use consecutive_happy::search::find_happy_in_residue;
use consecutive_happy::{verify_certificate, Constructor, ConstructorConfig, Params};

fn main() -> consecutive_happy::Result<()> {
    let params = Params::new(3, 14)?;
    let ctor = Constructor::new(params, ConstructorConfig::default())?;
    for a in 0..13 {
        match find_happy_in_residue(&params, a, 13, 1_000_000)? {
            Some(h) => println!("{a} mod 13: {h}"),
            None => {
                // Small happy numbers for (3, 14) avoid some classes entirely.
                let cert = ctor.certify_residue(a)?;
                let Goal::ResidueWitness { value, .. } = &cert.goal else {
                    unreachable!()
                };
                println!(
                    "{a} mod 13: none below 10^6; constructed {} ({})",
                    describe(ctor.sym(), value),
                    verify_certificate(&cert)
                );
            }
        }
    }
    // The same class lifted mod 13^3 = 2197.
    let cert = ctor.certify_lifted_residue(5)?;
    let Goal::ResidueWitness { value, .. } = &cert.goal else {
        unreachable!()
    };
    println!(
        "5 mod 2197: {} ({})",
        describe(ctor.sym(), value),
        verify_certificate(&cert)
    );
    Ok(())
}
