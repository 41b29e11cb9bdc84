//! Oracles shared by the integration tests.
#![allow(dead_code)]

use colecole::mesh::*;
use colecole::stepper::*;
use colecole::weights::{fbdf2_weights, sftr_weights, shift_combine, SchemeParams};
use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use rand::Rng;

pub fn random_edge(g: &GridSpec<f64>, pec: bool, rng: &mut impl Rng) -> VecField<f64> {
    let mut e = VecField::zeros(g, false);
    for i in 0..g.nx() {
        for j in 0..=g.ny() {
            e.set_ex(i, j, rng.gen_range(-1.0..1.0));
        }
    }
    for i in 0..=g.nx() {
        for j in 0..g.ny() {
            e.set_ey(i, j, rng.gen_range(-1.0..1.0));
        }
    }
    e.with_pec(pec)
}

pub fn random_cell(g: &GridSpec<f64>, rng: &mut impl Rng) -> ScalarField<f64> {
    let mut h = ScalarField::zeros(g);
    for i in 0..g.nx() {
        for j in 0..g.ny() {
            h.set(i, j, rng.gen_range(-1.0..1.0));
        }
    }
    h
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Flat views of the unknowns of one step: free E dofs, all H dofs, all P dofs.
pub struct Layout {
    g: GridSpec<f64>,
    e_free: Vec<(bool, usize, usize)>,
    p_all: Vec<(bool, usize, usize)>,
    h_all: Vec<(usize, usize)>,
}

impl Layout {
    pub fn new(g: GridSpec<f64>) -> Self {
        let (nx, ny) = (g.nx(), g.ny());
        let ex_all = (0..nx).flat_map(|i| (0..=ny).map(move |j| (true, i, j)));
        let ey_all = (0..=nx).flat_map(|i| (0..ny).map(move |j| (false, i, j)));
        let p_all: Vec<_> = ex_all.chain(ey_all).collect();
        let e_free = p_all
            .iter()
            .copied()
            .filter(|&(x, i, j)| {
                if x {
                    j != 0 && j != ny
                } else {
                    i != 0 && i != nx
                }
            })
            .collect();
        let h_all = (0..nx).flat_map(|i| (0..ny).map(move |j| (i, j))).collect();
        Self {
            g,
            e_free,
            p_all,
            h_all,
        }
    }

    fn len(&self) -> usize {
        self.e_free.len() + self.h_all.len() + self.p_all.len()
    }

    fn unpack(&self, x: &DVector<f64>) -> (VecField<f64>, ScalarField<f64>, VecField<f64>) {
        let mut e = VecField::zeros(&self.g, true);
        let mut h = ScalarField::zeros(&self.g);
        let mut p = VecField::zeros(&self.g, false);
        let mut k = 0;
        for &(is_x, i, j) in &self.e_free {
            if is_x {
                e.set_ex(i, j, x[k])
            } else {
                e.set_ey(i, j, x[k])
            }
            k += 1;
        }
        for &(i, j) in &self.h_all {
            h.set(i, j, x[k]);
            k += 1;
        }
        for &(is_x, i, j) in &self.p_all {
            if is_x {
                p.set_ex(i, j, x[k])
            } else {
                p.set_ey(i, j, x[k])
            }
            k += 1;
        }
        (e, h, p)
    }

    fn pack_defects(&self, d: &Defects<VecField<f64>, ScalarField<f64>>) -> DVector<f64> {
        let get = |f: &VecField<f64>, (is_x, i, j): (bool, usize, usize)| {
            if is_x {
                f.ex(i, j)
            } else {
                f.ey(i, j)
            }
        };
        let mut v = Vec::with_capacity(self.len());
        v.extend(self.e_free.iter().map(|&k| get(&d.r1, k)));
        v.extend(self.h_all.iter().map(|&(i, j)| d.r2.get(i, j)));
        v.extend(self.p_all.iter().map(|&k| get(&d.r3, k)));
        DVector::from_vec(v)
    }
}

/// Solves the coupled step monolithically from the affine defect map.
pub fn dense_step(
    state: &SimState<f64, GridSpec<f64>>,
    sources: Option<&dyn Forcing<f64, GridSpec<f64>>>,
    lay: &Layout,
) -> (VecField<f64>, ScalarField<f64>, VecField<f64>) {
    let m = lay.len();
    let zero = DVector::zeros(m);
    let defect = |x: &DVector<f64>| {
        let (e, h, p) = lay.unpack(x);
        lay.pack_defects(&state.defects_for(&e, &h, &p, sources).unwrap())
    };
    let d0 = defect(&zero);
    let mut a = DMatrix::zeros(m, m);
    for c in 0..m {
        let mut u = DVector::zeros(m);
        u[c] = 1.0;
        a.set_column(c, &(defect(&u) - &d0));
    }
    let x = a.lu().solve(&(-d0)).expect("coupled system is nonsingular");
    lay.unpack(&x)
}

/// Closed-form 3x3 solve of the spatially uniform recurrence.
pub fn point_reference(
    m: MaterialParams<f64>,
    theta: f64,
    tau: f64,
    steps: usize,
    quad: Quadrature,
    init: (f64, f64),
    f: impl Fn(f64) -> [f64; 3],
) -> Vec<[f64; 3]> {
    let params = SchemeParams::new(m.alpha, theta).unwrap();
    let kernel = match quad {
        Quadrature::Sftr => sftr_weights(params, steps).into_values(),
        Quadrature::Fbdf2 => shift_combine(fbdf2_weights(m.alpha, steps).unwrap().values(), theta),
    };
    let scale = tau.powf(-m.alpha);
    let mem = m.tau0.powf(m.alpha);
    let mut out = vec![[init.0, init.1, 0.0]];
    for n in 1..=steps {
        let [e_old, h_old, p_old] = out[n - 1];
        let hist: f64 = (1..n).map(|k| kernel[n - k] * out[k][2]).sum::<f64>() * scale;
        let [f1, f2, f3] = f((n as f64 - theta) * tau);
        let a = Matrix3::new(
            m.c_e / tau,
            0.0,
            1.0 / tau,
            0.0,
            m.c_m / tau,
            0.0,
            -m.c_p * (1.0 - theta),
            0.0,
            mem * scale * kernel[0] + 1.0 - theta,
        );
        let b = Vector3::new(
            f1 + m.c_e * e_old / tau + p_old / tau,
            f2 + m.c_m * h_old / tau,
            f3 + m.c_p * theta * e_old - theta * p_old - mem * hist,
        );
        let x = a.lu().solve(&b).unwrap();
        out.push([x[0], x[1], x[2]]);
    }
    out
}
