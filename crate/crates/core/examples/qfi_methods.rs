//! Four estimates of the QFI for the Sagnac shift in the linear model, plus
//! the phase/amplitude split of the finite-difference value.
//!
//! ```text
//! cargo run --release --example qfi_methods -- 20 1.0 10
//! ```
//! (arguments: j, f/d, dt)

use rotsense::metrology::{
    closed_form_qfi_linear, effective_family, linear_coeffs, phase_amplitude_qfi, qfi_effective_fd,
    qfi_effective_generator,
};
use rotsense::model::EffectiveModelParams;
use rotsense::spin::SpinQuantum;

fn arg(k: usize, default: f64) -> f64 {
    std::env::args()
        .nth(k)
        .map_or(default, |s| s.parse().expect("numeric argument"))
}

fn main() -> rotsense::Result<()> {
    let (j, ratio, dt) = (arg(1, 20.0), arg(2, 1.0), arg(3, 10.0));
    let j = SpinQuantum::new(j)?;
    let p = EffectiveModelParams::from_products(j, 1.0, ratio * dt, dt, 0.0)?;
    println!("j = {j}, f = {}, d = {}, t = {}", p.f, p.d, p.t);

    let fd = qfi_effective_fd(&p)?;
    let gen = qfi_effective_generator(&p)?;
    let closed = closed_form_qfi_linear(j, &linear_coeffs(&p)?)?;
    for r in [&fd, &gen, &closed] {
        println!(
            "  {:<20} {:.12e}  (+/- {:.1e})",
            r.method.label(),
            r.value,
            r.error_estimate
        );
    }

    let split = phase_amplitude_qfi(effective_family(p)?, p.delta(), 1e-5)?;
    println!(
        "phase part f1 = {:.6e}, amplitude part = {:.6e}, f2 = {:.6e}",
        split.f1, split.amplitude_term, split.f2
    );

    let d0 = EffectiveModelParams::new(j, p.f, 0.0, 0.0, p.t)?;
    println!(
        "d = 0: F = {:.10e}, 4 t^2 = {:.10e}",
        qfi_effective_fd(&d0)?.value,
        4.0 * p.t * p.t
    );
    Ok(())
}
