//! The modular toolkit behind the residue constructions.

use consecutive_happy::numtheory::{
    crt_solve, discrete_log, euler_phi, factorize, mod_pow, primitive_root, successor_power_log,
};

fn main() -> consecutive_happy::Result<()> {
    let n = 9u64;
    let f = factorize(n.pow(2));
    println!("{} = {:?}, phi = {}", f.n, f.factors, euler_phi(f.n));

    let g = primitive_root(3, 4)?;
    let x = discrete_log(g, 10, 81)?;
    println!(
        "primitive root mod 81: {g}; {g}^{x} = {} (mod 81)",
        mod_pow(g, x, 81)
    );

    let (r, m) = crt_solve(&[(2, 3), (3, 5), (2, 7)])?;
    println!("x = 2 (3), 3 (5), 2 (7)  =>  x = {r} mod {m}");

    // Powers of n + 1 hit every class a = 1 (mod n) modulo n^k.
    for a in [1, 10, 19, 28, 73] {
        let r = successor_power_log(n, a, 2)?;
        println!(
            "(n+1)^{r} = {} = {a} (mod {})",
            mod_pow(n + 1, r, n * n),
            n * n
        );
    }
    Ok(())
}
