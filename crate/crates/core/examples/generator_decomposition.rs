//! Project the numerically exact generator onto Jx, Jy, Jz and the five
//! quadratic operators, and compare with the closed-form coefficients.

use rotsense::metrology::{
    decompose_generator, effective_generator, linear_coeffs, nonlinear_coeffs, perturbative_coeffs,
    GeneratorCoefficients,
};
use rotsense::model::EffectiveModelParams;
use rotsense::spin::SpinQuantum;

fn show(name: &str, c: &GeneratorCoefficients) {
    let a = c.to_array();
    print!("{name:<14}");
    for x in a {
        print!(" {x:>12.5e}");
    }
    println!();
}

fn main() -> rotsense::Result<()> {
    let j = SpinQuantum::new(20.0)?;
    println!(
        "{:<14} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "", "Cx", "Cy", "Cz", "Cxx", "Cyy", "Cxy", "Cyz", "Czx"
    );

    let p = EffectiveModelParams::from_products(j, 1.0, 5.0, 10.0, 0.0)?;
    let dec = decompose_generator(&effective_generator(&p)?, j)?;
    println!(
        "linear model, ft = 5, dt = 10 (residual {:.1e})",
        dec.residual
    );
    show("numeric", &dec.coeffs);
    show("closed form", &linear_coeffs(&p)?);

    for e_over_d in [1e-3, 1e-2] {
        let p = p.with_e(e_over_d * p.d);
        let dec = decompose_generator(&effective_generator(&p)?, j)?;
        println!("e/d = {e_over_d} (residual {:.1e})", dec.residual);
        show("numeric", &dec.coeffs);
        show("first order", &nonlinear_coeffs(&p)?);
        show("quadrature", &perturbative_coeffs(&p)?);
    }
    Ok(())
}
