use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OptimizerKind {
    Sgd,
    Adam { beta1: f64, beta2: f64, eps: f64 },
}

impl Default for OptimizerKind {
    fn default() -> Self {
        OptimizerKind::Adam {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Optimizer {
    kind: OptimizerKind,
    lr: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Optimizer {
    pub fn new(kind: OptimizerKind, lr: f64, len: usize) -> Self {
        let (m, v) = match kind {
            OptimizerKind::Sgd => (Vec::new(), Vec::new()),
            OptimizerKind::Adam { .. } => (vec![0.0; len], vec![0.0; len]),
        };
        Optimizer { kind, lr, m, v, t: 0 }
    }

    pub fn step(&mut self, theta: &mut [f64], grad: &[f64]) {
        match self.kind {
            OptimizerKind::Sgd => {
                for (x, g) in theta.iter_mut().zip(grad) {
                    *x -= self.lr * g;
                }
            }
            OptimizerKind::Adam { beta1, beta2, eps } => {
                self.t += 1;
                let c1 = 1.0 - beta1.powi(self.t);
                let c2 = 1.0 - beta2.powi(self.t);
                for k in 0..theta.len() {
                    let g = grad[k];
                    let (m, v) = (&mut self.m[k], &mut self.v[k]);
                    *m = beta1 * *m + (1.0 - beta1) * g;
                    *v = beta2 * *v + (1.0 - beta2) * g * g;
                    if *m == 0.0 && *v == 0.0 {
                        continue;
                    }
                    theta[k] -= self.lr * (*m / c1) / ((*v / c2).sqrt() + eps);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_a_quadratic() {
        for kind in [OptimizerKind::Sgd, OptimizerKind::default()] {
            let mut x = vec![3.0, -2.0];
            let mut opt = Optimizer::new(kind, 0.05, 2);
            for _ in 0..2000 {
                let g: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
                opt.step(&mut x, &g);
            }
            assert!(x.iter().all(|v| v.abs() < 1e-2), "{kind:?} {x:?}");
        }
    }
}
