//! The convention ledger: every sign or ordering choice that calibration
//! fixed, with the test that pins it. Rendered from the constants the
//! engines use.

use serde::Serialize;

use crate::graph::{KRule, PathConventions};
use crate::scalar::BERNOULLI_CONVENTION;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConventionEntry {
    pub name: &'static str,
    pub value: String,
    pub pinned_by: &'static str,
    pub disambiguates: &'static str,
}

fn k_rule_text(rule: KRule) -> &'static str {
    match rule {
        KRule::FirstMinusVisit => "index of the first vertex of the path lying in g_- (path length if none)",
        KRule::LongestHPrefix => "length of the longest initial subpath ending in h",
    }
}

/// Entries for the conventions compiled into this build.
pub fn entries() -> Vec<ConventionEntry> {
    let path = PathConventions::CALIBRATED;
    vec![
        ConventionEntry {
            name: "Bernoulli sign",
            value: BERNOULLI_CONVENTION.name().to_string(),
            pinned_by: "graph::tests::sl2_integral, graph::tests::calibration_is_unique",
            disambiguates: "Bernoulli numbers inside c(k, n)",
        },
        ConventionEntry {
            name: "K(p) sign",
            value: format!("K(p) = {}c(k(p), length(p))", if path.negate_k { "-" } else { "+" }),
            pinned_by: "graph::tests::abelian, graph::tests::calibration_is_unique",
            disambiguates: "overall sign of the path weight; the literal reading gives A(M) = -M on an abelian algebra",
        },
        ConventionEntry {
            name: "k(p)",
            value: k_rule_text(path.k_rule).to_string(),
            pinned_by: "graph::tests::calibration_is_unique",
            disambiguates: "which subpath length enters c(k, n)",
        },
        ConventionEntry {
            name: "edge measure",
            value: "each edge s -> t labelled P_i contributes -c X^i, with c the coefficient of e_t in [P_i, e_s]; \
                    the new X^i multiplies on the left, so an odd label picks up (-1)^(odd labels of larger index) \
                    and a repeated odd label kills the path"
                .to_string(),
            pinned_by: "superalgebra::gl11_engines_agree",
            disambiguates: "order and signs of odd labels in mu(p)",
        },
        ConventionEntry {
            name: "Chevalley signs",
            value: "eps(a_i, a_j) = -1 if i = j or if i < j are adjacent in the Dynkin diagram, else 1; \
                    [e_a, e_b] = sg(a) sg(b) sg(a+b) eps(a, b) e_(a+b)"
                .to_string(),
            pinned_by: "liealg::chevalley::tests::small_algebras_validate",
            disambiguates: "structure constants of A, D and E",
        },
        ConventionEntry {
            name: "coinduced operators",
            value: "T(g) = sum_i phi^i(-X, g) d/dX^i + rho(h(-X, g)) with left derivatives; \
                    no (-1)^|X^i| prefactor"
                .to_string(),
            pinned_by: "realize::tests::sl2_coinduced_golden, superalgebra::gl11_coinduced_homomorphism",
            disambiguates: "the X -> -X twist and the odd-variable sign; the prefactor (-1)^|X^i| breaks [T(E_11), T(p-)] on gl(1|1)",
        },
        ConventionEntry {
            name: "induced operators",
            value: "I(g) = sum_i (-1)^(|g||P_i|) P_i phi^i(d/dP, g) + rho(h(d/dP, g)) with left derivatives".to_string(),
            pinned_by: "superalgebra::gl11_induced_homomorphism",
            disambiguates: "sign in front of P_i; the prefactor (-1)^((1+|g|)|P_i|) breaks [I(E_11), I(p-)] on gl(1|1)",
        },
        ConventionEntry {
            name: "contragredient",
            value: "rho*(b) = -rho(b)^st with (A^st)_sr = (-1)^(|A||r|) A_rs".to_string(),
            pinned_by: "realize::rep::tests::adjoint_and_dual_are_representations",
            disambiguates: "supertranspose used for V*",
        },
        ConventionEntry {
            name: "duality pairing",
            value: "<f (x) xi, m (x) v> = (-1)^(deg m + |xi||m|) <f, m> xi(v)".to_string(),
            pinned_by: "realize::tests::sl2_duality",
            disambiguates: "antipode twist between S(g_-)* (x) V* and S(g_-) (x) V",
        },
        ConventionEntry {
            name: "statistics",
            value: "generators are the degree-one basis elements; degree of a generator is the top total degree \
                    (coefficient plus derivative) of its coinduced operator; counts are nonzero (monomial, basis \
                    vector) terms of A(M) + B(M)"
                .to_string(),
            pinned_by: "verify::tests::statistics_soft_and_hard",
            disambiguates: "what the reported path, monomial and degree figures measure",
        },
    ]
}

pub const UNCALIBRATED_BANNER: &str = "**Uncalibrated**: no convention has been fixed yet.\n";

/// Markdown table for a list of entries.
pub fn render(entries: &[ConventionEntry]) -> String {
    if entries.is_empty() {
        return UNCALIBRATED_BANNER.to_string();
    }
    let mut out = String::from("| Convention | Value | Pinned by | Disambiguates |\n|---|---|---|---|\n");
    let cell = |s: &str| s.replace('|', "\\|");
    for e in entries {
        out.push_str(&format!(
            "| {} | {} | `{}` | {} |\n",
            cell(e.name),
            cell(&e.value),
            e.pinned_by,
            cell(e.disambiguates)
        ));
    }
    out
}

pub fn render_ledger() -> String {
    render(&entries())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_ledger_has_banner() {
        assert_eq!(render(&[]), UNCALIBRATED_BANNER);
    }

    #[test]
    fn book_chapter_matches_constants() {
        let chapter = include_str!("../../../book/src/conventions.md");
        assert!(chapter.contains(&render_ledger()), "regenerate the ledger table in book/src/conventions.md");
    }
}
