use anyhow::{anyhow, bail, Result};
use colecole::stepper::Quadrature;

/// One parameter set of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Job {
    pub alpha: f64,
    pub theta: f64,
    pub quadrature: Quadrature,
}

impl Job {
    pub fn scheme_name(&self) -> &'static str {
        match self.quadrature {
            Quadrature::Sftr => "sftr",
            Quadrature::Fbdf2 => "fbdf2",
        }
    }

    pub fn label(&self) -> String {
        format!("{}_a{}_t{}", self.scheme_name(), self.alpha, self.theta)
    }
}

fn pairs(list: &[(f64, f64)], quadrature: Quadrature) -> Vec<Job> {
    list.iter()
        .map(|&(alpha, theta)| Job {
            alpha,
            theta,
            quadrature,
        })
        .collect()
}

/// `alpha:theta,alpha:theta,...`
fn parse_list(sweep: &str, quadrature: Quadrature) -> Result<Vec<Job>> {
    let mut jobs = Vec::new();
    for item in sweep.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (a, t) = item
            .split_once(':')
            .ok_or_else(|| anyhow!("sweep entry `{item}` is not of the form alpha:theta"))?;
        let alpha = a
            .trim()
            .parse()
            .map_err(|_| anyhow!("bad alpha `{a}` in sweep"))?;
        let theta = t
            .trim()
            .parse()
            .map_err(|_| anyhow!("bad theta `{t}` in sweep"))?;
        jobs.push(Job {
            alpha,
            theta,
            quadrature,
        });
    }
    if jobs.is_empty() {
        bail!("empty sweep");
    }
    Ok(jobs)
}

/// `standard` (six reference pairs) or an explicit list.
pub fn converge_jobs(sweep: &str, quadrature: Quadrature) -> Result<Vec<Job>> {
    match sweep {
        "standard" => Ok(pairs(
            &[
                (0.1, 0.05),
                (0.1, 0.5),
                (0.5, 0.25),
                (0.5, 0.5),
                (0.9, 0.45),
                (0.9, 0.5),
            ],
            quadrature,
        )),
        _ => parse_list(sweep, quadrature),
    }
}

/// `shifts`, `orders`, `schemes` or an explicit list.
pub fn energy_jobs(sweep: &str, quadrature: Quadrature) -> Result<Vec<Job>> {
    match sweep {
        "shifts" => Ok(pairs(
            &[(0.5, 0.3), (0.5, 0.4), (0.5, 0.5)],
            Quadrature::Sftr,
        )),
        "orders" => Ok(pairs(
            &[(0.1, 0.5), (0.3, 0.5), (0.5, 0.5), (0.7, 0.5), (0.9, 0.5)],
            Quadrature::Sftr,
        )),
        "schemes" => Ok([0.2, 0.5, 0.8, 0.99]
            .iter()
            .flat_map(|&alpha| {
                [Quadrature::Sftr, Quadrature::Fbdf2].map(|quadrature| Job {
                    alpha,
                    theta: 0.5,
                    quadrature,
                })
            })
            .collect()),
        _ => parse_list(sweep, quadrature),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_sweeps() {
        assert_eq!(
            converge_jobs("standard", Quadrature::Sftr).unwrap().len(),
            6
        );
        assert_eq!(
            energy_jobs("shifts", Quadrature::Fbdf2).unwrap()[0].quadrature,
            Quadrature::Sftr
        );
        assert_eq!(energy_jobs("orders", Quadrature::Sftr).unwrap().len(), 5);
        let both = energy_jobs("schemes", Quadrature::Sftr).unwrap();
        assert_eq!(both.len(), 8);
        assert_eq!(both[1].label(), "fbdf2_a0.2_t0.5");
    }

    #[test]
    fn explicit_lists() {
        let jobs = converge_jobs("0.3:0.15, 0.7:0.5", Quadrature::Fbdf2).unwrap();
        assert_eq!(jobs.len(), 2);
        assert_eq!((jobs[1].alpha, jobs[1].theta), (0.7, 0.5));
        assert!(energy_jobs("0.3", Quadrature::Sftr).is_err());
        assert!(energy_jobs("x:0.2", Quadrature::Sftr).is_err());
        assert!(energy_jobs(" , ", Quadrature::Sftr).is_err());
    }
}
