//! Build a certificate for a run of consecutive happy numbers, check it, and
//! watch the checker reject a tampered copy.

use consecutive_happy::constructor::{Goal, Identity};
use consecutive_happy::{
    verify_certificate, Constructor, ConstructorConfig, Params, WitnessCertificate,
};

fn main() -> consecutive_happy::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().ok());
    let e = args.next().flatten().unwrap_or(2) as u32;
    let b = args.next().flatten().unwrap_or(10);
    let m = args.next().flatten().unwrap_or(3);

    let params = Params::new(e, b)?;
    let ctor = Constructor::new(params, ConstructorConfig::default())?;
    let cert = ctor.certify_run(m)?;
    let path = std::env::temp_dir().join(format!("happy-run-{e}-{b}-{m}.json"));
    cert.save(&path)?;
    println!(
        "{} steps, {} leaves, depth {} -> {}",
        cert.steps.len(),
        cert.leaves.len(),
        cert.max_depth(),
        path.display()
    );

    let loaded = WitnessCertificate::load(&path)?;
    println!("verify: {}", verify_certificate(&loaded));

    let mut bad = loaded.clone();
    if let Goal::RunOfLength { length, .. } = &mut bad.goal {
        *length += 1;
    }
    println!("claiming one more: {}", verify_certificate(&bad));

    let mut bad = loaded.clone();
    if let Some(step) = bad
        .steps
        .iter_mut()
        .find(|s| matches!(s.identity, Identity::Pad { .. }))
    {
        if let Identity::Pad { digit, .. } = &mut step.identity {
            *digit = if *digit == 1 { 2 } else { 1 };
        }
    }
    println!("changed pad digit: {}", verify_certificate(&bad));
    Ok(())
}
