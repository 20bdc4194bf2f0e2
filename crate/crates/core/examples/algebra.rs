use hamkit::algebra::{
    crt_combine, interpolate_univariate, BinaryField, Field, GroupAlgebra, PrimeField, ResidueRing, Ring,
};

fn main() -> hamkit::Result<()> {
    let gf = BinaryField::new(8)?;
    let a = gf.elem(0x53);
    let inv = gf.inv(&a).expect("nonzero");
    println!("GF(2^8): 0x53 * 0x{:02x} = 0x{:02x}", inv.0, gf.mul(&a, &inv).0);

    // (g + 1)^2 = g^2 + 1 = 0 in characteristic 2
    let alg = GroupAlgebra::new(gf.clone(), 3)?;
    let y = alg.add(&alg.unit(5), &alg.identity());
    println!(
        "group algebra (Z/2)^3: (g5 + 1)^2 is zero: {}",
        alg.is_zero(&alg.mul(&y, &y))
    );

    let z = ResidueRing::new(3, 4)?;
    println!(
        "Z/81: valuation of 54 is {}, 7^-1 = {:?}",
        z.valuation(54),
        z.unit_inverse(7)
    );

    let (x, m) = crt_combine(&[(1, 2, 3), (2, 3, 2), (3, 5, 1)])?;
    println!("x = 1 mod 8, 2 mod 9, 3 mod 5  =>  x = {x} mod {m}");

    let f = PrimeField::new(101)?;
    let pts: Vec<(u64, u64)> = (0..4).map(|x| (x, f.elem(2 * x * x * x + 7))).collect();
    println!(
        "interpolated 2x^3 + 7 over GF(101): {:?}",
        interpolate_univariate(&f, &pts, 3)?.coeffs
    );
    Ok(())
}
