//! Single-site monomial operators on the group algebra C[G].
//!
//! Every local operator in the twisted models is a monomial matrix: a
//! left-multiplication permutation composed with a diagonal of roots of
//! unity, times a global phase. The canonical form absorbs the identity
//! basis state's phase into the global, so equality of canonical triples is
//! equality of matrices.
//!
//! The twisted shift families X^α, X^ᾱ, X̃^ᾱ come straight from a cocycle
//! table. The dual twisted clocks Z^β, Z^β̄ are realized as generalized
//! Paulis ω·X_q·Z_χ with (q, ω) solved exactly so that the β projective law,
//! Z^β̄_χ·Z^β_χ = X_{φ(χ)}, [Z^β, Z^β̄] = 0 and Z^β_χ X_g = χ(g) X_g Z^β_χ
//! all hold on the nose.

use std::fmt;

use crate::cocycle::{Cocycle, CocycleError, DualIso};
use crate::cyclo::{Cyc, CycRing};
use crate::group::{FiniteAbelianGroup, GroupElement, Irrep};
use crate::phase::Phase;
use crate::zmod::HomZn;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SiteKind {
    X,
    XAlpha,
    XAlphaBar,
    XAlphaTilde,
    Z,
    ZBeta,
    ZBetaBar,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OpLabel {
    Element(GroupElement),
    Character(Irrep),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MakeError {
    /// A twisted kind was requested without its cocycle.
    MissingCocycle(SiteKind),
    /// Group-element label passed to a Z kind or vice versa.
    LabelSort(SiteKind),
    /// No exact monomial realization of the dual cocycle exists.
    NoDualRealization,
    /// Dual realizations are only built over exponent-2 groups.
    UnsupportedGroup,
}

impl fmt::Display for MakeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MakeError::MissingCocycle(k) => write!(f, "kind {k:?} needs a cocycle"),
            MakeError::LabelSort(k) => write!(f, "label sort does not match kind {k:?}"),
            MakeError::NoDualRealization => write!(f, "no monomial realization of the dual cocycle"),
            MakeError::UnsupportedGroup => write!(f, "dual twists need an exponent-2 group"),
        }
    }
}

impl std::error::Error for MakeError {}

/// Result of comparing AB against BA.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CommutationResult {
    /// AB = exp(2πi·phase)·BA on every basis state.
    Scalar(Phase),
    /// The two orderings differ by more than a scalar.
    NonScalar,
}

impl CommutationResult {
    pub fn commutes(&self) -> bool {
        matches!(self, CommutationResult::Scalar(p) if p.is_zero())
    }
}

/// A monomial operator |k⟩ ↦ exp(2πi·global)·exp(2πi·diag[k])·|perm·k⟩ in
/// canonical form (diag at the identity is zero).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SiteOperator {
    perm: GroupElement,
    diag: Vec<Phase>,
    global: Phase,
}

impl fmt::Debug for SiteOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Site(perm={:?}, global={:?}, diag={:?})", self.perm, self.global, self.diag)
    }
}

impl SiteOperator {
    fn canonical(perm: GroupElement, mut diag: Vec<Phase>, global: Phase) -> SiteOperator {
        let shift = diag[0];
        if !shift.is_zero() {
            for d in diag.iter_mut() {
                *d = d.sub(shift);
            }
        }
        SiteOperator {
            perm,
            diag,
            global: global.add(shift),
        }
    }

    pub fn identity(group: &FiniteAbelianGroup) -> SiteOperator {
        SiteOperator {
            perm: group.identity(),
            diag: vec![Phase::ZERO; group.order()],
            global: Phase::ZERO,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.0 == 0 && self.global.is_zero() && self.diag.iter().all(Phase::is_zero)
    }

    pub fn perm(&self) -> GroupElement {
        self.perm
    }

    pub fn global(&self) -> Phase {
        self.global
    }

    pub fn diag(&self) -> &[Phase] {
        &self.diag
    }

    /// Plain shift X_g |h⟩ = |gh⟩.
    pub fn x(group: &FiniteAbelianGroup, g: GroupElement) -> SiteOperator {
        SiteOperator {
            perm: g,
            diag: vec![Phase::ZERO; group.order()],
            global: Phase::ZERO,
        }
    }

    /// Clock Z_χ |h⟩ = χ(h) |h⟩.
    pub fn z(group: &FiniteAbelianGroup, chi: Irrep) -> SiteOperator {
        let diag = group.elements().map(|h| group.character(chi, h)).collect();
        SiteOperator::canonical(group.identity(), diag, Phase::ZERO)
    }

    /// Twisted shift X^α_g |h⟩ = α(g,h) |gh⟩.
    pub fn x_alpha(alpha: &Cocycle, g: GroupElement) -> SiteOperator {
        let group = alpha.group();
        let diag = group.elements().map(|h| alpha.value(g, h)).collect();
        SiteOperator::canonical(g, diag, Phase::ZERO)
    }

    /// Conjugate twisted shift X^ᾱ_g |h⟩ = conj(α(g,h)) |gh⟩.
    pub fn x_alpha_bar(alpha: &Cocycle, g: GroupElement) -> SiteOperator {
        let group = alpha.group();
        let diag = group
            .elements()
            .map(|h| alpha.value(g, h).neg())
            .collect();
        SiteOperator::canonical(g, diag, Phase::ZERO)
    }

    /// Right-handed conjugate shift X̃^ᾱ_g |h⟩ = conj(α(hg⁻¹,g)) |hg⁻¹⟩,
    /// the partner that commutes with X^α for any abelian group.
    pub fn x_alpha_tilde(alpha: &Cocycle, g: GroupElement) -> SiteOperator {
        let group = alpha.group();
        let ginv = group.inv(g);
        let diag = group
            .elements()
            .map(|h| alpha.value(group.mul(h, ginv), g).neg())
            .collect();
        SiteOperator::canonical(ginv, diag, Phase::ZERO)
    }

    /// Unified constructor matching the operator alphabet.
    pub fn make(
        group: &FiniteAbelianGroup,
        kind: SiteKind,
        label: OpLabel,
        cocycle: Option<&Cocycle>,
    ) -> Result<SiteOperator, MakeError> {
        use SiteKind::*;
        match (kind, label) {
            (X, OpLabel::Element(g)) => Ok(SiteOperator::x(group, g)),
            (Z, OpLabel::Character(chi)) => Ok(SiteOperator::z(group, chi)),
            (XAlpha, OpLabel::Element(g)) => {
                let c = cocycle.ok_or(MakeError::MissingCocycle(kind))?;
                Ok(SiteOperator::x_alpha(c, g))
            }
            (XAlphaBar, OpLabel::Element(g)) => {
                let c = cocycle.ok_or(MakeError::MissingCocycle(kind))?;
                Ok(SiteOperator::x_alpha_bar(c, g))
            }
            (XAlphaTilde, OpLabel::Element(g)) => {
                let c = cocycle.ok_or(MakeError::MissingCocycle(kind))?;
                Ok(SiteOperator::x_alpha_tilde(c, g))
            }
            (ZBeta, OpLabel::Character(chi)) => {
                let c = cocycle.ok_or(MakeError::MissingCocycle(kind))?;
                let reps = DualPauliReps::solve(c)?;
                Ok(reps.z_beta(chi))
            }
            (ZBetaBar, OpLabel::Character(chi)) => {
                let c = cocycle.ok_or(MakeError::MissingCocycle(kind))?;
                let reps = DualPauliReps::solve(c)?;
                Ok(reps.z_beta_bar(chi))
            }
            _ => Err(MakeError::LabelSort(kind)),
        }
    }

    /// Exact product AB (apply B first).
    pub fn compose(&self, group: &FiniteAbelianGroup, other: &SiteOperator) -> SiteOperator {
        let perm = group.mul(self.perm, other.perm);
        let diag: Vec<Phase> = group
            .elements()
            .map(|k| {
                other.diag[k.0 as usize].add(self.diag[group.mul(other.perm, k).0 as usize])
            })
            .collect();
        SiteOperator::canonical(perm, diag, self.global.add(other.global))
    }

    pub fn dagger(&self, group: &FiniteAbelianGroup) -> SiteOperator {
        let pinv = group.inv(self.perm);
        let diag: Vec<Phase> = group
            .elements()
            .map(|j| self.diag[group.mul(pinv, j).0 as usize].neg())
            .collect();
        SiteOperator::canonical(pinv, diag, self.global.neg())
    }

    pub fn pow(&self, group: &FiniteAbelianGroup, k: i64) -> SiteOperator {
        let base = if k >= 0 { self.clone() } else { self.dagger(group) };
        let mut acc = SiteOperator::identity(group);
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(group, &base);
        }
        acc
    }

    pub fn scaled(&self, phase: Phase) -> SiteOperator {
        SiteOperator {
            perm: self.perm,
            diag: self.diag.clone(),
            global: self.global.add(phase),
        }
    }

    /// Scalar relating AB to BA, or NonScalar.
    pub fn commutation_phase(
        &self,
        group: &FiniteAbelianGroup,
        other: &SiteOperator,
    ) -> CommutationResult {
        let ab = self.compose(group, other);
        let ba = other.compose(group, self);
        if ab.diag != ba.diag {
            CommutationResult::NonScalar
        } else {
            CommutationResult::Scalar(ab.global.sub(ba.global))
        }
    }

    /// Exact trace as a cyclotomic integer.
    pub fn trace(&self, group: &FiniteAbelianGroup, ring: &CycRing) -> Cyc {
        if self.perm != group.identity() {
            return ring.zero();
        }
        let mut acc = ring.zero();
        for k in group.elements() {
            acc = ring.add(
                &acc,
                &ring.phase(self.global.add(self.diag[k.0 as usize])),
            );
        }
        acc
    }

    /// Dense matrix of exact entries; None is an exact zero. Row-major,
    /// entry [j][k] is the coefficient of |j⟩ in the image of |k⟩.
    pub fn as_dense(&self, group: &FiniteAbelianGroup) -> Vec<Vec<Option<Phase>>> {
        let n = group.order();
        let mut m = vec![vec![None; n]; n];
        for k in group.elements() {
            let j = group.mul(self.perm, k);
            m[j.0 as usize][k.0 as usize] = Some(self.global.add(self.diag[k.0 as usize]));
        }
        m
    }

    /// Rebuild from a dense monomial matrix (for round-trip checks).
    pub fn from_dense(
        group: &FiniteAbelianGroup,
        m: &[Vec<Option<Phase>>],
    ) -> Option<SiteOperator> {
        let n = group.order();
        let mut perm = None;
        let mut diag = vec![Phase::ZERO; n];
        for k in group.elements() {
            let mut hit = None;
            for j in group.elements() {
                if let Some(p) = m[j.0 as usize][k.0 as usize] {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some((j, p));
                }
            }
            let (j, p) = hit?;
            let shift = group.mul(j, group.inv(k));
            match perm {
                None => perm = Some(shift),
                Some(s) if s == shift => {}
                _ => return None,
            }
            diag[k.0 as usize] = p;
        }
        Some(SiteOperator::canonical(perm?, diag, Phase::ZERO))
    }
}

/// Exact monomial realization of the dual projective representations
/// Z^β_χ = ω_χ·X_{q(χ)}·Z_χ and its conjugate partner.
#[derive(Clone, Debug)]
pub struct DualPauliReps {
    group: FiniteAbelianGroup,
    beta: Cocycle,
    q: Vec<GroupElement>,
    omega: Vec<Phase>,
    q_bar: Vec<GroupElement>,
    omega_bar: Vec<Phase>,
}

impl DualPauliReps {
    /// Plain clocks: the realization of the trivial dual cocycle.
    pub fn untwisted(group: &FiniteAbelianGroup) -> DualPauliReps {
        let e = group.identity();
        let n = group.order();
        DualPauliReps {
            group: group.clone(),
            beta: Cocycle::trivial(group.clone()),
            q: vec![e; n],
            omega: vec![Phase::ZERO; n],
            q_bar: vec![e; n],
            omega_bar: vec![Phase::ZERO; n],
        }
    }

    /// Solve for an exact realization of the dual cocycle `beta` (a cocycle
    /// of Ĝ written on the shared index space). The duality Ĝ → G is derived
    /// from β's own slant through the evaluation pairing.
    pub fn solve(beta: &Cocycle) -> Result<DualPauliReps, MakeError> {
        if beta.is_trivial() {
            return Ok(DualPauliReps::untwisted(beta.group()));
        }
        let group = beta.group();
        let mut map = Vec::with_capacity(group.order());
        for chi in group.irreps() {
            let found = group.elements().find(|&g| {
                group.irreps().all(|sig| {
                    group.character(sig, g)
                        == beta
                            .value(GroupElement(chi.0), GroupElement(sig.0))
                            .sub(beta.value(GroupElement(sig.0), GroupElement(chi.0)))
                })
            });
            map.push(found.ok_or(MakeError::NoDualRealization)?);
        }
        let phi = DualIso::new(group, map).map_err(|_| MakeError::NoDualRealization)?;
        DualPauliReps::solve_with_duality(beta, &phi)
    }

    pub fn solve_with_duality(beta: &Cocycle, phi: &DualIso) -> Result<DualPauliReps, MakeError> {
        if beta.is_trivial() {
            return Ok(DualPauliReps::untwisted(beta.group()));
        }
        let group = beta.group().clone();
        if group.exponent() > 2 {
            return Err(MakeError::UnsupportedGroup);
        }
        let n = group.order();
        let rank = group.rank();
        // candidate hom q: Ĝ → G by images of the dual basis irreps
        let mut images = vec![0u16; rank];
        loop {
            let q: Vec<GroupElement> = group
                .irreps()
                .map(|chi| {
                    let t = group.irrep_tuple(chi).to_vec();
                    let mut acc = group.identity();
                    for (i, &e) in t.iter().enumerate() {
                        acc = group.mul(acc, group.pow(GroupElement(images[i]), e as i64));
                    }
                    acc
                })
                .collect();
            if let Some(reps) = Self::try_q(&group, beta, phi, &q) {
                return Ok(reps);
            }
            // advance
            let mut pos = 0;
            loop {
                if pos == rank {
                    return Err(MakeError::NoDualRealization);
                }
                images[pos] += 1;
                if (images[pos] as usize) < n {
                    break;
                }
                images[pos] = 0;
                pos += 1;
            }
        }
    }

    fn try_q(
        group: &FiniteAbelianGroup,
        beta: &Cocycle,
        phi: &DualIso,
        q: &[GroupElement],
    ) -> Option<DualPauliReps> {
        // hom well-definedness: order of q(basis_i) must divide n_i
        for (i, &ni) in group.factors().iter().enumerate() {
            let basis = group.irrep(
                &(0..group.rank())
                    .map(|j| u32::from(j == i))
                    .collect::<Vec<_>>(),
            );
            if group.pow(q[basis.0 as usize], ni as i64) != group.identity() {
                return None;
            }
        }
        let qbar: Vec<GroupElement> = group
            .irreps()
            .map(|chi| group.mul(phi.apply(chi), group.inv(q[chi.0 as usize])))
            .collect();
        // slant condition: χ(qσ) − σ(qχ) = β(χ,σ) − β(σ,χ)
        // pairing condition: χ(q̄σ) = σ(qχ)
        for chi in group.irreps() {
            for sig in group.irreps() {
                let gc = GroupElement(chi.0);
                let gs = GroupElement(sig.0);
                let lhs = group
                    .character(chi, q[sig.0 as usize])
                    .sub(group.character(sig, q[chi.0 as usize]));
                let rhs = beta
                    .value(gc, gs)
                    .sub(beta.value(gs, gc));
                if lhs != rhs {
                    return None;
                }
                if group.character(chi, qbar[sig.0 as usize])
                    != group.character(sig, q[chi.0 as usize])
                {
                    return None;
                }
            }
        }
        let omega = Self::solve_scalars(group, beta, q)?;
        let beta_bar = beta.conj();
        let mut omega_bar = Self::solve_scalars(group, &beta_bar, &qbar)?;
        // enforce Z^β̄_χ Z^β_χ = X_{φχ}: the residual is a character-valued
        // homomorphism absorbed into ω̄
        for chi in group.irreps() {
            let i = chi.0 as usize;
            let s = omega_bar[i]
                .add(omega[i])
                .add(group.character(chi, q[i]));
            omega_bar[i] = omega_bar[i].sub(s);
        }
        let reps = DualPauliReps {
            group: group.clone(),
            beta: beta.clone(),
            q: q.to_vec(),
            omega,
            q_bar: qbar,
            omega_bar,
        };
        reps.verify(phi).then_some(reps)
    }

    /// Solve ω_χ + ω_σ − ω_{χσ} = β(χ,σ) − χ(q(σ)) over Z_N.
    fn solve_scalars(
        group: &FiniteAbelianGroup,
        beta: &Cocycle,
        q: &[GroupElement],
    ) -> Option<Vec<Phase>> {
        let n = group.order();
        let modulus = group.phase_modulus();
        let mut rows = Vec::new();
        let mut targets = Vec::new();
        for chi in group.irreps() {
            for sig in group.irreps() {
                let prod = group.irrep_mul(chi, sig);
                let mut row = vec![0u64; n];
                row[chi.0 as usize] = (row[chi.0 as usize] + 1) % modulus;
                row[sig.0 as usize] = (row[sig.0 as usize] + 1) % modulus;
                row[prod.0 as usize] = (row[prod.0 as usize] + modulus - 1) % modulus;
                rows.push(row);
                let t = beta
                    .value(GroupElement(chi.0), GroupElement(sig.0))
                    .sub(group.character(chi, q[sig.0 as usize]));
                targets.push(t.exponent(modulus));
            }
        }
        let hom = HomZn::new(
            modulus,
            vec![modulus; n],
            vec![modulus; rows.len()],
            rows,
        );
        let sol = hom.solve(&targets)?;
        let mut omega: Vec<Phase> = sol
            .iter()
            .map(|&k| Phase::from_exponent(k as i64, modulus))
            .collect();
        // gauge: ω at the trivial irrep is zero
        let shift = omega[0];
        for w in omega.iter_mut() {
            *w = w.sub(shift);
        }
        Some(omega)
    }

    fn verify(&self, phi: &DualIso) -> bool {
        let g0 = &self.group;
        for chi in g0.irreps() {
            for sig in g0.irreps() {
                let w_chi = self.z_beta(chi);
                let w_sig = self.z_beta(sig);
                let prod = w_chi.compose(g0, &w_sig);
                let expect = self
                    .z_beta(g0.irrep_mul(chi, sig))
                    .scaled(self.beta.value(GroupElement(chi.0), GroupElement(sig.0)));
                if prod != expect {
                    return false;
                }
                let wb_chi = self.z_beta_bar(chi);
                let wb_sig = self.z_beta_bar(sig);
                let prodb = wb_chi.compose(g0, &wb_sig);
                let expectb = self
                    .z_beta_bar(g0.irrep_mul(chi, sig))
                    .scaled(self.beta.value(GroupElement(chi.0), GroupElement(sig.0)).neg());
                if prodb != expectb {
                    return false;
                }
                if !matches!(
                    w_chi.commutation_phase(g0, &wb_sig),
                    CommutationResult::Scalar(p) if p.is_zero()
                ) {
                    return false;
                }
            }
            // Z^β̄_χ Z^β_χ = X_{φ(χ)}
            let pair = self.z_beta_bar(chi).compose(g0, &self.z_beta(chi));
            if pair != SiteOperator::x(g0, phi.apply(chi)) {
                return false;
            }
        }
        true
    }

    pub fn z_beta(&self, chi: Irrep) -> SiteOperator {
        let x = SiteOperator::x(&self.group, self.q[chi.0 as usize]);
        let z = SiteOperator::z(&self.group, chi);
        x.compose(&self.group, &z).scaled(self.omega[chi.0 as usize])
    }

    pub fn z_beta_bar(&self, chi: Irrep) -> SiteOperator {
        let x = SiteOperator::x(&self.group, self.q_bar[chi.0 as usize]);
        let z = SiteOperator::z(&self.group, chi);
        x.compose(&self.group, &z)
            .scaled(self.omega_bar[chi.0 as usize])
    }

    pub fn beta(&self) -> &Cocycle {
        &self.beta
    }
}

/// The symmetric character matrix with rows in hat order: 2V for Z₂×Z₂,
/// entries W[j][k] = hat(g_j)(g_k) scaled by nothing (integer-valued for
/// exponent-2 groups). Returned as exact phases.
pub fn character_conjugator(
    group: &FiniteAbelianGroup,
    hat: &DualIso,
) -> Vec<Vec<Phase>> {
    group
        .elements()
        .map(|gj| {
            let chi = hat.inverse_of(gj);
            group
                .elements()
                .map(|gk| group.character(chi, gk))
                .collect()
        })
        .collect()
}

/// Build the canonical algebra context for a group and cocycle: dual cocycle
/// via the slant duality plus its monomial realization, when they exist.
#[derive(Clone)]
pub struct TwistAlgebra {
    pub group: FiniteAbelianGroup,
    pub alpha: Cocycle,
    pub duality: Option<DualIso>,
    pub beta: Option<Cocycle>,
    pub dual_reps: Option<DualPauliReps>,
}

impl TwistAlgebra {
    pub fn new(alpha: Cocycle) -> TwistAlgebra {
        let group = alpha.group().clone();
        if alpha.is_trivial() {
            return TwistAlgebra {
                beta: Some(Cocycle::trivial(group.clone())),
                dual_reps: Some(DualPauliReps::untwisted(&group)),
                duality: None,
                group,
                alpha,
            };
        }
        let duality = alpha.hat_iso().ok();
        let beta = duality
            .as_ref()
            .and_then(|phi| alpha.dual_cocycle(phi).ok());
        let dual_reps = match (&beta, &duality) {
            (Some(b), Some(phi)) => DualPauliReps::solve_with_duality(b, phi).ok(),
            _ => None,
        };
        TwistAlgebra {
            group,
            alpha,
            duality,
            beta,
            dual_reps,
        }
    }

    pub fn hat(&self, g: GroupElement) -> Irrep {
        self.alpha.hat(g)
    }
}

impl From<CocycleError> for MakeError {
    fn from(_: CocycleError) -> MakeError {
        MakeError::NoDualRealization
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (FiniteAbelianGroup, Cocycle, GroupElement, GroupElement, GroupElement) {
        let c = Cocycle::canonical_z2z2();
        let g = c.group().clone();
        let a = g.element(&[1, 0]);
        let b = g.element(&[0, 1]);
        let ab = g.element(&[1, 1]);
        (g, c, a, b, ab)
    }

    /// Matrix of quarter-turn exponents; None is an exact zero entry.
    fn qmat(entries: [[Option<i64>; 4]; 4]) -> Vec<Vec<Option<Phase>>> {
        entries
            .iter()
            .map(|row| row.iter().map(|e| e.map(|q| Phase::new(q, 4))).collect())
            .collect()
    }

    #[test]
    fn x_alpha_a_matches_explicit_matrix() {
        let (g, c, a, ..) = setup();
        let m = SiteOperator::x_alpha(&c, a).as_dense(&g);
        // rows e,a,b,ab / cols e,a,b,ab:
        //   [0 1 0 0; 1 0 0 0; 0 0 0 -i; 0 0 i 0]
        let expect = qmat([
            [None, Some(0), None, None],
            [Some(0), None, None, None],
            [None, None, None, Some(3)],
            [None, None, Some(1), None],
        ]);
        assert_eq!(m, expect);
    }

    #[test]
    fn x_alpha_b_matches_explicit_matrix() {
        let (g, c, _, b, _) = setup();
        let m = SiteOperator::x_alpha(&c, b).as_dense(&g);
        // [0 0 1 0; 0 0 0 i; 1 0 0 0; 0 -i 0 0]
        let expect = qmat([
            [None, None, Some(0), None],
            [None, None, None, Some(1)],
            [Some(0), None, None, None],
            [None, Some(3), None, None],
        ]);
        assert_eq!(m, expect);
    }

    #[test]
    fn projective_law_all_pairs() {
        let (g, c, ..) = setup();
        for x in g.elements() {
            for y in g.elements() {
                let prod = SiteOperator::x_alpha(&c, x).compose(&g, &SiteOperator::x_alpha(&c, y));
                let expect = SiteOperator::x_alpha(&c, g.mul(x, y)).scaled(c.value(x, y));
                assert_eq!(prod, expect, "law fails at {x:?},{y:?}");
            }
        }
    }

    #[test]
    fn x_alpha_ab_from_product() {
        let (g, c, a, b, ab) = setup();
        // X^α_{ab} = -i · X^α_a · X^α_b
        let prod = SiteOperator::x_alpha(&c, a).compose(&g, &SiteOperator::x_alpha(&c, b));
        let expect = SiteOperator::x_alpha(&c, ab).scaled(Phase::QUARTER);
        assert_eq!(prod, expect);
    }

    #[test]
    fn anticommutation_distinct_nontrivial() {
        let (g, c, ..) = setup();
        for x in g.elements().skip(1) {
            for y in g.elements().skip(1) {
                let r = SiteOperator::x_alpha(&c, x)
                    .commutation_phase(&g, &SiteOperator::x_alpha(&c, y));
                let expect = if x == y { Phase::ZERO } else { Phase::HALF };
                assert_eq!(r, CommutationResult::Scalar(expect));
            }
        }
    }

    #[test]
    fn clock_shift_relation_both_twists() {
        // Z_χ X^γ_g = χ(g) X^γ_g Z_χ for γ trivial and γ = α
        let (g, c, ..) = setup();
        for chi in g.irreps() {
            for x in g.elements() {
                let z = SiteOperator::z(&g, chi);
                for op in [SiteOperator::x(&g, x), SiteOperator::x_alpha(&c, x)] {
                    let r = z.commutation_phase(&g, &op);
                    assert_eq!(r, CommutationResult::Scalar(g.character(chi, x)));
                }
            }
        }
    }

    #[test]
    fn conjugate_pair_gives_clock() {
        // X^ᾱ_g X^α_g = Z_{hat(g)} and [X^α_g, X^ᾱ_h] = 0
        let (g, c, ..) = setup();
        for x in g.elements() {
            let prod =
                SiteOperator::x_alpha_bar(&c, x).compose(&g, &SiteOperator::x_alpha(&c, x));
            assert_eq!(prod, SiteOperator::z(&g, c.hat(x)));
            for y in g.elements() {
                let r = SiteOperator::x_alpha(&c, x)
                    .commutation_phase(&g, &SiteOperator::x_alpha_bar(&c, y));
                assert_eq!(r, CommutationResult::Scalar(Phase::ZERO));
            }
        }
    }

    #[test]
    fn tilde_coincides_for_exponent_two_and_slant_law() {
        let (g, c, ..) = setup();
        for x in g.elements() {
            assert_eq!(
                SiteOperator::x_alpha_tilde(&c, x),
                SiteOperator::x_alpha_bar(&c, x),
                "exponent-2 coincidence at {x:?}"
            );
        }
        // X^α_g · X̃^ᾱ_g = Z_{ι_g} on a group with elements of order 4
        let z4 = FiniteAbelianGroup::new(&[2, 4]);
        let c4 = Cocycle::from_pairing_matrix(z4.clone(), &[vec![0, 2], vec![0, 0]]).unwrap();
        for x in z4.elements() {
            let prod =
                SiteOperator::x_alpha(&c4, x).compose(&z4, &SiteOperator::x_alpha_tilde(&c4, x));
            assert_eq!(prod, SiteOperator::z(&z4, c4.slant(x).unwrap()));
            for y in z4.elements() {
                // commutation scalar of twisted shifts is the slant character
                let r = SiteOperator::x_alpha(&c4, x)
                    .commutation_phase(&z4, &SiteOperator::x_alpha(&c4, y));
                assert_eq!(
                    r,
                    CommutationResult::Scalar(
                        z4.character(c4.slant(x).unwrap(), y)
                    )
                );
                // and X̃ commutes with X^α for all labels
                let r = SiteOperator::x_alpha(&c4, x)
                    .commutation_phase(&z4, &SiteOperator::x_alpha_tilde(&c4, y));
                assert_eq!(r, CommutationResult::Scalar(Phase::ZERO));
            }
        }
    }

    #[test]
    fn dual_reps_relations() {
        let c = Cocycle::canonical_z2z2();
        let g = c.group().clone();
        let phi = c.hat_iso().unwrap();
        let beta = c.dual_cocycle(&phi).unwrap();
        let reps = DualPauliReps::solve_with_duality(&beta, &phi).unwrap();
        // Z^β̄_ĝ Z^β_ĝ = X_g for every g
        for x in g.elements() {
            let chi = c.hat(x);
            let pair = reps.z_beta_bar(chi).compose(&g, &reps.z_beta(chi));
            assert_eq!(pair, SiteOperator::x(&g, x));
        }
        // Z^σ_χ X_g = χ(g) X_g Z^σ_χ for σ = β and the plain clock
        for chi in g.irreps() {
            for x in g.elements() {
                for op in [reps.z_beta(chi), reps.z_beta_bar(chi), SiteOperator::z(&g, chi)] {
                    let r = op.commutation_phase(&g, &SiteOperator::x(&g, x));
                    assert_eq!(r, CommutationResult::Scalar(g.character(chi, x)));
                }
            }
        }
    }

    #[test]
    fn conjugation_by_character_matrix() {
        // X_g = V·Z_ĝ·V entrywise, using 2V with integer entries: 4·X_g = (2V)·Z_ĝ·(2V)
        let c = Cocycle::canonical_z2z2();
        let g = c.group().clone();
        let hat = c.hat_iso().unwrap();
        let w = character_conjugator(&g, &hat);
        use crate::cyclo::CycRing;
        let ring = CycRing::new(g.phase_modulus());
        for x in g.elements() {
            let z = SiteOperator::z(&g, c.hat(x)).as_dense(&g);
            let expect = SiteOperator::x(&g, x).as_dense(&g);
            let n = g.order();
            for i in 0..n {
                for j in 0..n {
                    let mut acc = ring.zero();
                    for k in 0..n {
                        for l in 0..n {
                            if let Some(p) = z[k][l] {
                                let term = ring.mul(
                                    &ring.phase(w[i][k].add(p)),
                                    &ring.phase(w[l][j]),
                                );
                                acc = ring.add(&acc, &term);
                            }
                        }
                    }
                    let want = match expect[i][j] {
                        None => ring.zero(),
                        Some(p) => ring.scale(&ring.phase(p), 4),
                    };
                    assert_eq!(acc, want, "entry ({i},{j}) of V·Z·V for {x:?}");
                }
            }
        }
    }

    #[test]
    fn dagger_and_roundtrip() {
        let (g, c, a, ..) = setup();
        let op = SiteOperator::x_alpha(&c, a).scaled(Phase::QUARTER);
        assert_eq!(op.dagger(&g).dagger(&g), op);
        let dense = op.as_dense(&g);
        assert_eq!(SiteOperator::from_dense(&g, &dense).unwrap(), op);
        // X_g is self-adjoint for exponent-2 groups
        for x in g.elements() {
            assert_eq!(SiteOperator::x(&g, x).dagger(&g), SiteOperator::x(&g, x));
        }
    }

    #[test]
    fn traces() {
        use crate::cyclo::CycRing;
        let (g, c, a, ..) = setup();
        let ring = CycRing::new(g.phase_modulus());
        let id = SiteOperator::identity(&g);
        assert_eq!(ring.as_integer(&id.trace(&g, &ring)), Some(4));
        let z = SiteOperator::z(&g, c.hat(a));
        assert!(z.trace(&g, &ring).is_zero());
        assert!(SiteOperator::x(&g, a).trace(&g, &ring).is_zero());
    }

    #[test]
    fn make_errors() {
        let (g, c, a, ..) = setup();
        assert!(matches!(
            SiteOperator::make(&g, SiteKind::XAlpha, OpLabel::Element(a), None),
            Err(MakeError::MissingCocycle(_))
        ));
        assert!(matches!(
            SiteOperator::make(&g, SiteKind::Z, OpLabel::Element(a), Some(&c)),
            Err(MakeError::LabelSort(_))
        ));
        assert!(SiteOperator::make(&g, SiteKind::X, OpLabel::Element(a), None).is_ok());
    }
}
