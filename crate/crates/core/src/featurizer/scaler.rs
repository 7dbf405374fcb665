use crate::error::{Error, Result};

/// Per-column standardization with population statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaler {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

pub fn fit_scaler<R: AsRef<[f64]>>(rows: &[R]) -> Result<Scaler> {
    let Some(first) = rows.first() else {
        return Err(Error::EmptyCorpus);
    };
    let dim = first.as_ref().len();
    let n = rows.len() as f64;
    let mut means = vec![0.0; dim];
    for r in rows {
        let r = r.as_ref();
        if r.len() != dim {
            return Err(Error::Shape(format!("scaler row of length {} (expected {dim})", r.len())));
        }
        for (m, v) in means.iter_mut().zip(r) {
            *m += v;
        }
    }
    means.iter_mut().for_each(|m| *m /= n);
    let mut vars = vec![0.0; dim];
    for r in rows {
        for ((s, v), m) in vars.iter_mut().zip(r.as_ref()).zip(&means) {
            *s += (v - m) * (v - m);
        }
    }
    let stds = vars.into_iter().map(|s| (s / n).sqrt()).collect();
    Ok(Scaler { means, stds })
}

impl Scaler {
    fn effective_std(s: f64) -> f64 {
        if s == 0.0 {
            1.0
        } else {
            s
        }
    }

    pub fn transform(&self, v: &[f64]) -> Vec<f64> {
        v.iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(x, (m, s))| (x - m) / Self::effective_std(*s))
            .collect()
    }

    pub fn inverse(&self, z: &[f64]) -> Vec<f64> {
        z.iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(x, (m, s))| x * Self::effective_std(*s) + m)
            .collect()
    }
}

pub fn transform_scaler(s: &Scaler, v: &[f64]) -> Vec<f64> {
    s.transform(v)
}
