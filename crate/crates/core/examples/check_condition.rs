//! Independence test on a symbolic and on a rational channel.

use iadof::algebra::Rational;
use iadof::channel::ChannelMatrix;
use iadof::condition::{check_all, Verdict};

fn main() -> iadof::Result<()> {
    let generic = ChannelMatrix::generic(3)?;
    for d in 0..=2 {
        let report = check_all(&generic, d)?;
        println!("generic K=3, d={d}: phi={} all independent: {}", report.phi, report.all_independent());
    }

    let q = |p: i64, s: i64| Rational::new(p.into(), s.into());
    let rational = ChannelMatrix::rational(&[
        vec![q(3, 2), q(2, 1), q(-1, 3)],
        vec![q(5, 1), q(7, 4), q(1, 1)],
        vec![q(-2, 1), q(1, 5), q(9, 7)],
    ])?;
    for verdict in check_all(&rational, 0)?.receivers {
        if let Verdict::Dependent { certificate, .. } = verdict {
            println!(
                "receiver {}: a = {:?}, b = {:?}, verified: {}",
                certificate.receiver,
                certificate.a.iter().map(ToString::to_string).collect::<Vec<_>>(),
                certificate.b.iter().map(ToString::to_string).collect::<Vec<_>>(),
                certificate.verify(&rational)
            );
        }
    }
    Ok(())
}
