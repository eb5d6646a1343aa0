//! Operators `T(g)` on the coinduced module and `I(g)` on the induced module,
//! assembled from `phi(X, g)` and `h(X, g)`.
//!
//! ```text
//! T(g) = sum_i phi^i(-X, g) d/dX^i + rho(h(-X, g))
//! I(g) = sum_i (-1)^{|g||P_i|} P_i phi^i(d/dP, g) + rho(h(d/dP, g))
//! ```
//!
//! Derivatives are left derivatives. With that choice the `phi` terms carry
//! one factor `(-1)^{|P_i|}` less than the forms with `(-1)^{|X^i|}` and
//! `(-1)^{(1+|g|)|P_i|}`; the superalgebra homomorphism tests fix this.

mod op;
mod rep;
mod weight;

pub use op::{apply_derivatives, monomials_up_to, normal_order, ApplyError, DiffOperator, ModuleElement, OpKey, Side};
pub use rep::{mat_add_scaled, mat_mul, HRepresentation, Matrix, RepError, RepKind};
pub use weight::{tex_scalar, WeightPoly};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::Decomposition;
use crate::graph::{path_integral, ActionGraph, GraphError, IntegralOptions};
use crate::liealg::GVector;
use crate::series::{default_truncation, phi_h_general, phi_h_subalgebra, PhiH};
use crate::superpoly::{pair_monomials, Monomial, Parity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Graph,
    Series,
}

/// `phi` and `h` for one adapted basis element. The series engine uses the
/// subalgebra formula when it applies and the general one otherwise; the
/// graph engine needs `g_-` to be a subalgebra for a finite answer, else the
/// truncation bounds the path length.
pub fn generator_data(decomp: &Decomposition, g: usize, engine: Engine, truncation: Option<usize>) -> Result<PhiH, GraphError> {
    let v = GVector::basis(g);
    let trunc = truncation.or_else(|| default_truncation(decomp, &v).ok()).unwrap_or(8);
    match engine {
        Engine::Series => Ok(match phi_h_subalgebra(decomp, &v, trunc) {
            Ok(r) => r,
            Err(_) => phi_h_general(decomp, &v, trunc),
        }),
        Engine::Graph => {
            let graph = ActionGraph::build(decomp);
            let max_length = if decomp.is_subalgebra() { None } else { Some(trunc) };
            let r = path_integral(&graph, decomp, g, &IntegralOptions { max_length, ..Default::default() })?;
            Ok(PhiH { phi: r.a_part, h: r.b_part, truncation: trunc, truncated: r.partial })
        }
    }
}

/// `T(g)` for a single generator.
pub fn coinduced_operator(decomp: &Decomposition, data: &PhiH, rep: &HRepresentation) -> DiffOperator {
    let mut op = DiffOperator::zero(Side::Coinduced, rep.parities.clone());
    for i in 0..decomp.var_count() {
        let x = decomp.var(i);
        let d = Monomial::var(x);
        for (m, c) in data.phi_component(decomp, i).iter() {
            let neg = m.degree() % 2 == 1;
            let w = WeightPoly::constant(c.clone().signed(neg));
            for v in 0..rep.dim() {
                op.add_term(OpKey { coeff: m.clone(), deriv: d.clone(), row: v, col: v }, w.clone());
            }
        }
    }
    for (m, w) in data.h.iter() {
        let neg = m.degree() % 2 == 1;
        for (&(r, c), val) in &rep.of_vector(w) {
            op.add_term(OpKey { coeff: m.clone(), deriv: Monomial::one(), row: r, col: c }, val.clone().signed_poly(neg));
        }
    }
    op
}

/// `I(g)` for a single generator of parity `g_parity`.
pub fn induced_operator(decomp: &Decomposition, data: &PhiH, rep: &HRepresentation, g_parity: Parity) -> DiffOperator {
    let mut op = DiffOperator::zero(Side::Induced, rep.parities.clone());
    for i in 0..decomp.var_count() {
        let x = decomp.var(i);
        let p = Monomial::var(x);
        let neg = g_parity.is_odd() && x.parity.is_odd();
        for (m, c) in data.phi_component(decomp, i).iter() {
            let w = WeightPoly::constant(c.clone().signed(neg));
            for v in 0..rep.dim() {
                op.add_term(OpKey { coeff: p.clone(), deriv: m.clone(), row: v, col: v }, w.clone());
            }
        }
    }
    for (m, w) in data.h.iter() {
        for (&(r, c), val) in &rep.of_vector(w) {
            op.add_term(OpKey { coeff: Monomial::one(), deriv: m.clone(), row: r, col: c }, val.clone());
        }
    }
    op
}

impl WeightPoly {
    fn signed_poly(self, neg: bool) -> WeightPoly {
        if neg {
            self.neg()
        } else {
            self
        }
    }
}

/// Operators for every adapted basis element.
#[derive(Debug, Clone)]
pub struct Realization {
    pub side: Side,
    pub rep: HRepresentation,
    pub ops: Vec<DiffOperator>,
    /// Some generator series was cut at the truncation.
    pub truncated: bool,
}

impl Realization {
    pub fn from_data(decomp: &Decomposition, rep: &HRepresentation, side: Side, data: &[PhiH]) -> Self {
        let alg = decomp.algebra();
        let ops = data
            .iter()
            .enumerate()
            .map(|(g, d)| match side {
                Side::Coinduced => coinduced_operator(decomp, d, rep),
                Side::Induced => induced_operator(decomp, d, rep, alg.parity(g)),
            })
            .collect();
        Realization { side, rep: rep.clone(), ops, truncated: data.iter().any(|d| d.truncated) }
    }

    pub fn build(
        decomp: &Decomposition,
        rep: &HRepresentation,
        side: Side,
        engine: Engine,
        truncation: Option<usize>,
    ) -> Result<Self, GraphError> {
        let data = (0..decomp.algebra().dim())
            .into_par_iter()
            .map(|g| generator_data(decomp, g, engine, truncation))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_data(decomp, rep, side, &data))
    }

    /// The operator of an arbitrary vector (adapted coordinates).
    pub fn of_vector(&self, v: &GVector) -> DiffOperator {
        let mut out = DiffOperator::zero(self.side, self.rep.parities.clone());
        for (k, c) in v.iter() {
            out = out.add(&self.ops[k].scale(c));
        }
        out
    }
}

/// `<f (x) xi, m (x) v> = (-1)^{deg m + |xi||m|} <f, m> xi(v)` for `f` in the
/// coinduced module over `V*` and `m` in the induced module over `V`.
pub fn pair_elements(parities: &[Parity], f: &ModuleElement, m: &ModuleElement) -> WeightPoly {
    let mut out = WeightPoly::zero();
    for ((mf, xi), wf) in f.iter() {
        for ((mm, v), wm) in m.iter() {
            if xi != v || mf != mm {
                continue;
            }
            let neg = (mm.degree() % 2 == 1) ^ (parities[*xi].is_odd() && mm.parity().is_odd());
            let c = pair_monomials(mf, mm).signed(neg);
            out = out.add(&wf.mul(wm).scale(&c));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualityFailure {
    pub generator: usize,
    pub f: (Monomial, usize),
    pub m: (Monomial, usize),
    pub lhs: WeightPoly,
    pub rhs: WeightPoly,
}

/// Check `<T(g)F, M> = -(-1)^{|g||F|} <F, I(g)M>` for all basis `g` and all
/// basis elements `F`, `M` up to the truncation degree. `coinduced` must be
/// built over the contragredient of the representation used by `induced`.
pub fn pair_duality_check(
    decomp: &Decomposition,
    coinduced: &Realization,
    induced: &Realization,
    truncation: usize,
) -> Result<(), DualityFailure> {
    let alg = decomp.algebra();
    let vars: Vec<_> = (0..decomp.var_count()).map(|i| decomp.var(i)).collect();
    let monos = monomials_up_to(&vars, truncation);
    let parities = &induced.rep.parities;
    let dim = parities.len();
    let failures: Vec<DualityFailure> = (0..alg.dim())
        .into_par_iter()
        .filter_map(|g| {
            let g_odd = alg.parity(g).is_odd();
            let im: Vec<ModuleElement> = monos
                .iter()
                .flat_map(|m| (0..dim).map(move |v| (m, v)))
                .map(|(m, v)| induced.ops[g].apply(&ModuleElement::basis(m.clone(), v), None).expect("no cap"))
                .collect();
            for f in &monos {
                for xi in 0..dim {
                    let fe = ModuleElement::basis(f.clone(), xi);
                    let tf = coinduced.ops[g].apply(&fe, None).expect("no cap");
                    let f_odd = f.parity().is_odd() ^ parities[xi].is_odd();
                    let mut k = 0;
                    for m in &monos {
                        for v in 0..dim {
                            let me = ModuleElement::basis(m.clone(), v);
                            let lhs = pair_elements(parities, &tf, &me);
                            let rhs = pair_elements(parities, &fe, &im[k]);
                            k += 1;
                            let rhs = if g_odd && f_odd { rhs } else { rhs.neg() };
                            if lhs != rhs {
                                return Some(DualityFailure { generator: g, f: (f.clone(), xi), m: (m.clone(), v), lhs, rhs });
                            }
                        }
                    }
                }
            }
            None
        })
        .collect();
    match failures.into_iter().next() {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

/// `T(g)` applied to a basis element, for quick inspection.
pub fn act(op: &DiffOperator, m: &Monomial, v: usize) -> ModuleElement {
    op.apply(&ModuleElement::basis(m.clone(), v), None).expect("no cap")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{build_gl, build_simply_laced, Family};
    use crate::superpoly::Indeterminate;

    fn sl2() -> (crate::liealg::LieSuperAlgebra, Decomposition) {
        let g = build_simply_laced(Family::A, 1).unwrap();
        let d = Decomposition::triangular(&g).unwrap();
        (g, d)
    }

    fn key(coeff: &[usize], deriv: &[usize]) -> OpKey {
        let m = |v: &[usize]| Monomial::from_sorted(v.iter().map(|&i| Indeterminate::even(i)).collect());
        OpKey { coeff: m(coeff), deriv: m(deriv), row: 0, col: 0 }
    }

    #[test]
    fn sl2_coinduced_golden() {
        let (g, d) = sl2();
        let rep = HRepresentation::symbolic_character(&d).unwrap();
        let r = Realization::build(&d, &rep, Side::Coinduced, Engine::Series, None).unwrap();
        let l = WeightPoly::param(0);
        let mut tf = DiffOperator::zero(Side::Coinduced, vec![Parity::Even]);
        tf.add_term(key(&[], &[0]), WeightPoly::one());
        let mut th = DiffOperator::zero(Side::Coinduced, vec![Parity::Even]);
        th.add_term(key(&[0], &[0]), WeightPoly::from(2));
        th.add_term(key(&[], &[]), l.clone());
        let mut te = DiffOperator::zero(Side::Coinduced, vec![Parity::Even]);
        te.add_term(key(&[0, 0], &[0]), WeightPoly::from(-1));
        te.add_term(key(&[0], &[]), l.neg());
        assert_eq!(r.ops[g.index_of("f").unwrap()], tf);
        assert_eq!(r.ops[g.index_of("h").unwrap()], th);
        assert_eq!(r.ops[g.index_of("e").unwrap()], te);
        assert_eq!(r.ops[g.index_of("e").unwrap()].supercommutator(&tf), th);
    }

    #[test]
    fn engines_give_same_operators() {
        let d = Decomposition::triangular(&build_gl(3)).unwrap();
        let rep = HRepresentation::symbolic_character(&d).unwrap();
        for side in [Side::Coinduced, Side::Induced] {
            let a = Realization::build(&d, &rep, side, Engine::Series, None).unwrap();
            let b = Realization::build(&d, &rep, side, Engine::Graph, None).unwrap();
            assert_eq!(a.ops, b.ops);
        }
    }

    #[test]
    fn sl2_duality() {
        let (_, d) = sl2();
        let rep = HRepresentation::symbolic_character(&d).unwrap();
        let t = Realization::build(&d, &rep.contragredient(&d), Side::Coinduced, Engine::Series, None).unwrap();
        let i = Realization::build(&d, &rep, Side::Induced, Engine::Series, None).unwrap();
        pair_duality_check(&d, &t, &i, 4).unwrap();
        // without the contragredient the check fails
        let t_bad = Realization::build(&d, &rep, Side::Coinduced, Engine::Series, None).unwrap();
        assert!(pair_duality_check(&d, &t_bad, &i, 4).is_err());
    }
}
