//! Evaluate cosine certificates for the lower bound on any label density,
//! and check the characteristic-function identity they rest on.

use ded::dist::{consistency_report, lower_bound_certificate, CosineCertificate, IndepLabelDensity};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let specs = std::env::args().skip(1).collect::<Vec<_>>();
    let specs = if specs.is_empty() {
        vec!["1:4.5".to_string(), "1:4.77,0.279:9.62".to_string()]
    } else {
        specs
    };
    for spec in &specs {
        let cert = CosineCertificate::parse(spec)?;
        let bound = lower_bound_certificate(&cert)?;
        println!(
            "{spec:>22}: N = {:+.6}, Dn = {:.6}, bound {bound:.8}",
            cert.numerator(),
            cert.denominator()
        );
    }

    let cert = CosineCertificate::parse(&specs[0])?;
    let d = IndepLabelDensity::poly_d();
    for row in consistency_report(&cert, &d) {
        println!(
            "t = {:.3}: E cos = {:+.12}, by parts = {:+.12}",
            row.t, row.characteristic, row.by_parts
        );
    }
    Ok(())
}
