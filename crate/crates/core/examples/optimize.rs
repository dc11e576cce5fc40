use frqme_core::{optimize_drive, Error, OptimizeMethod, SystemParams};

fn main() -> Result<(), Error> {
    let sys = SystemParams::new(1.0, 1.0, 0.0, 1e-6)?;
    let best = optimize_drive(&sys, 0.1, OptimizeMethod::ClosedForm)?;
    println!(
        "drive at {:.1} rad/s for peak fidelity {:.8}",
        best.omega1_opt_numeric, best.f_max
    );
    Ok(())
}
