//! Run-length numerals whose run counts are numerals themselves.

use consecutive_happy::{Sym, TowerNat};

fn main() -> consecutive_happy::Result<()> {
    let sym = Sym::new(10);

    // 233192 nines above the digits 20958: T is still a plain sum.
    let h = sym.add_disjoint(
        &sym.pad_run(9, &TowerNat::Small(5), &TowerNat::Small(233192))?,
        &TowerNat::Small(20958),
        &TowerNat::Small(5),
    )?;
    println!("h = {h}");
    println!(
        "digits: {}, T(h) = {}",
        sym.digit_count(&h)?,
        sym.power_digit_sum(&h, 2)?
    );

    // A pad of ones whose count is h: far too long to write out, but its
    // residues and digit sums are still exact.
    let tower = sym.pad_ones(&TowerNat::Small(3), &h)?;
    println!("tower = {tower}  (depth {})", tower.depth());
    println!("T(tower) = h: {}", sym.power_digit_sum(&tower, 2)? == h);
    for m in [7, 81, 9999] {
        println!("tower mod {m} = {}", sym.modulo(&tower, m)?);
    }

    let sum = sym.add(&tower, &TowerNat::Small(999))?;
    println!("tower + 999 = {sum}");
    println!("back: {}", sym.sub(&sum, &TowerNat::Small(999))? == tower);
    Ok(())
}
