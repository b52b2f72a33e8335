//! Levi-Civita geometry of the metric `g = Σ (ωⁱ)²` making the coframe orthonormal.
//!
//! Conventions: `ωⁱⱼ = Γⁱⱼₖ ωᵏ` with `Γⁱⱼₖ = −Γʲᵢₖ`, first structure equation
//! `dωⁱ = −ωⁱⱼ∧ωʲ`, curvature `Θⁱⱼ = dωⁱⱼ + ωⁱₖ∧ωᵏⱼ`. With these signs the
//! round sphere has `Θ¹₂(e₁,e₂) = +1`, and the scalar curvature is
//! `S = 2 Σ_{i<j} Θⁱⱼ(eᵢ,eⱼ)`.

use std::sync::OnceLock;

use nalgebra::DMatrix;

use crate::coframe::{frobenius_defect, Coframe, Frame};
use crate::error::{Error, Result};
use crate::forms::{subsets, top_ratio, PForm};
use crate::jet::Jet;

/// Unknowns `Γⁱⱼₖ` with `i < j`, in a fixed order.
fn unknowns(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// Equations `Γⁱⱼₖ − Γⁱₖⱼ = dωⁱ(eⱼ,eₖ)` with `j < k`, in a fixed order.
fn equations(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for jk in subsets(n, 2) {
            out.push((i, jk[0], jk[1]));
        }
    }
    out
}

/// Inverse of the constant map from skew `Γ` to the structure functions.
fn solver(n: usize) -> &'static DMatrix<f64> {
    static CACHE: [OnceLock<DMatrix<f64>>; 2] = [OnceLock::new(), OnceLock::new()];
    CACHE[n - 3].get_or_init(|| {
        let unk = unknowns(n);
        let eqs = equations(n);
        let col = |i: usize, j: usize, k: usize| -> Option<(usize, f64)> {
            if i == j {
                return None;
            }
            let (a, b, s) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
            let pos = unk.iter().position(|&u| u == (a, b, k)).unwrap();
            Some((pos, s))
        };
        let mut m = DMatrix::<f64>::zeros(eqs.len(), unk.len());
        for (r, &(i, j, k)) in eqs.iter().enumerate() {
            if let Some((c, s)) = col(i, j, k) {
                m[(r, c)] += s;
            }
            if let Some((c, s)) = col(i, k, j) {
                m[(r, c)] -= s;
            }
        }
        m.try_inverse().expect("the Levi-Civita system is uniquely solvable")
    })
}

#[derive(Debug, Clone)]
pub struct Connection {
    pub frame: Frame,
    /// `gamma[i][j][k] = Γⁱⱼₖ`.
    pub gamma: Vec<Vec<Vec<Jet>>>,
    /// `forms[i][j] = ωⁱⱼ` in coordinates.
    pub forms: Vec<Vec<PForm>>,
    /// Largest frame component of `dωⁱ + ωⁱⱼ∧ωʲ`.
    pub residual: f64,
}

impl Connection {
    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[i][j][k].value()
    }

    /// Residual of the first structure equation after replacing `Γ` by `gamma`.
    pub fn structure_residual(&self, gamma: &[Vec<Vec<f64>>]) -> Result<f64> {
        let n = self.dim();
        let like = self.gamma[0][0][0].truncate(0).lift(0.0);
        let mut worst = 0.0f64;
        for i in 0..n {
            let di = self.frame.forms()[i].d()?;
            let mut s = di.truncate(0);
            for j in 0..n {
                let c: Vec<Jet> = (0..n).map(|k| like.lift(gamma[i][j][k])).collect();
                let wij = combine0(&self.frame, &c);
                s = &s + &wij.wedge(&self.frame.forms()[j].truncate(0))?;
            }
            for v in self.frame.components(&s) {
                worst = worst.max(v.value().abs());
            }
        }
        Ok(worst)
    }
}

fn combine0(frame: &Frame, c: &[Jet]) -> PForm {
    let forms: Vec<PForm> = frame.forms().iter().map(|f| f.truncate(0)).collect();
    let mut out = forms[0].scale(&c[0]);
    for a in 1..forms.len() {
        out = &out + &forms[a].scale(&c[a]);
    }
    out
}

pub fn levi_civita(f: &Coframe) -> Result<Connection> {
    let n = f.dim();
    if !(3..=4).contains(&n) {
        return Err(Error::Structure(format!("levi_civita supports 3 and 4 dimensions, got {n}")));
    }
    let frame = f.frame()?;
    let pairs = subsets(n, 2);
    let mut rhs = Vec::new();
    for i in 0..n {
        let di = f.d(i).map_err(|e| e.at_stage("levi_civita"))?;
        rhs.extend(frame.components(&di));
    }
    debug_assert_eq!(rhs.len(), pairs.len() * n);
    let inv = solver(n);
    let unk = unknowns(n);
    let zero = rhs[0].lift(0.0);
    let mut gamma = vec![vec![vec![zero.clone(); n]; n]; n];
    for (u, &(i, j, k)) in unk.iter().enumerate() {
        let mut acc = zero.clone();
        for (e, r) in rhs.iter().enumerate() {
            let w = inv[(u, e)];
            if w != 0.0 {
                acc = &acc + &(r * w);
            }
        }
        gamma[j][i][k] = -&acc;
        gamma[i][j][k] = acc;
    }
    let mut forms = vec![vec![PForm::zero(n, 1, &zero); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                forms[i][j] = frame.combine(&gamma[i][j]).truncate(zero.order());
            }
        }
    }
    let mut residual = 0.0f64;
    for i in 0..n {
        let mut s = f.d(i)?.truncate(zero.order());
        for j in 0..n {
            if i != j {
                s = &s + &forms[i][j].wedge(&f.forms[j])?;
            }
        }
        for v in frame.components(&s) {
            residual = residual.max(v.value().abs());
        }
    }
    Ok(Connection {
        frame,
        gamma,
        forms,
        residual,
    })
}

#[derive(Debug, Clone)]
pub struct Curvature {
    /// `theta[i][j] = Θⁱⱼ` in coordinates.
    pub theta: Vec<Vec<PForm>>,
    /// Frame components of `Θⁱⱼ` over increasing pairs.
    pub comps: Vec<Vec<Vec<Jet>>>,
    frame: Frame,
}

impl Curvature {
    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    /// `Θⁱⱼ(e_a, e_b)`.
    pub fn entry(&self, i: usize, j: usize, a: usize, b: usize) -> f64 {
        if a == b {
            return 0.0;
        }
        let (p, q, s) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        let pos = subsets(self.dim(), 2)
            .iter()
            .position(|v| v[0] == p && v[1] == q)
            .unwrap();
        s * self.comps[i][j][pos].value()
    }

    /// Sectional curvature of the plane `(eᵢ, eⱼ)`.
    pub fn sectional(&self, i: usize, j: usize) -> f64 {
        self.entry(i, j, i, j)
    }

    /// Largest component of `Σⱼ Θⁱⱼ∧ωʲ`.
    pub fn bianchi_residual(&self) -> Result<f64> {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut s: Option<PForm> = None;
            for j in 0..n {
                let t = self.theta[i][j].wedge(&self.frame.forms()[j])?;
                s = Some(match s {
                    None => t,
                    Some(a) => &a + &t,
                });
            }
            for v in self.frame.components(&s.unwrap()) {
                worst = worst.max(v.value().abs());
            }
        }
        Ok(worst)
    }
}

pub fn curvature(conn: &Connection) -> Result<Curvature> {
    let n = conn.dim();
    let like = conn.gamma[0][1][0].clone();
    let mut theta = vec![vec![PForm::zero(n, 2, &like.truncate(0)); n]; n];
    let mut comps = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                comps[i][j] = vec![like.truncate(0).lift(0.0); n * (n - 1) / 2];
                continue;
            }
            let mut t = conn.forms[i][j].d().map_err(|e| e.at_stage("curvature"))?;
            for k in 0..n {
                if k != i && k != j {
                    t = &t + &conn.forms[i][k].wedge(&conn.forms[k][j])?;
                }
            }
            comps[i][j] = conn.frame.components(&t);
            theta[i][j] = t;
        }
    }
    Ok(Curvature {
        theta,
        comps,
        frame: conn.frame.clone(),
    })
}

pub fn scalar_curvature(curv: &Curvature) -> f64 {
    let n = curv.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += curv.sectional(i, j);
        }
    }
    2.0 * s
}

/// `(Θ¹₂∧Θ³₄ − Θ¹₃∧Θ²₄ + Θ¹₄∧Θ²₃) / Ω` in four dimensions.
pub fn pfaffian(curv: &Curvature) -> Result<f64> {
    if curv.dim() != 4 {
        return Err(Error::Structure("the Pfaffian is computed in four dimensions".into()));
    }
    let t = &curv.theta;
    let p = &(&t[0][1].wedge(&t[2][3])? - &t[0][2].wedge(&t[1][3])?) + &t[0][3].wedge(&t[1][2])?;
    let vol = curv.frame.basis(&[0, 1, 2, 3])?;
    Ok(top_ratio(&p, &vol)?.value())
}

/// Second fundamental form and curvatures of the leaves of `ω³ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeafGeometry {
    /// `S[a][b] = Γ³_{a b}` for `a, b ∈ {1, 2}`.
    pub s: [[f64; 2]; 2],
    /// `trace S`.
    pub trace: f64,
    /// Mean curvature `½ trace S`.
    pub h: f64,
    /// Intrinsic Gauss curvature `Θ¹₂(e₁,e₂) + det S`.
    pub k: f64,
    /// Extrinsic (Gauss–Kronecker) curvature `det S`.
    pub det: f64,
    /// `|ω³∧dω³ / Ω|`.
    pub frobenius: f64,
}

pub fn leaf_geometry(f: &Coframe, conn: &Connection, curv: &Curvature, tol: f64) -> Result<LeafGeometry> {
    if f.dim() != 3 {
        return Err(Error::Structure("leaf_geometry works on 3D coframes".into()));
    }
    let defect = frobenius_defect(&f.forms[2], f)?.value().abs();
    if defect > tol {
        return Err(Error::NotIntegrable(defect));
    }
    let g = |a, b| conn.gamma(2, a, b);
    let s = [[g(0, 0), g(0, 1)], [g(1, 0), g(1, 1)]];
    let trace = s[0][0] + s[1][1];
    let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    Ok(LeafGeometry {
        s,
        trace,
        h: 0.5 * trace,
        k: curv.sectional(0, 1) + det,
        det,
        frobenius: defect,
    })
}
