//! The group, arrangement and invariants, built once and shared by the
//! verification suites.

use std::sync::OnceLock;

use crate::arrangement::{Arrangement, PointClass};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::invariants::{
    build_psi30, fundamental_invariants, invariant_subspace, irreducibility_certificate, single_orbit_lines,
    weighted_irreducibility, witness_for, FundamentalInvariants, IrreducibilityReport, Psi30System, PsiForms,
};
use crate::picard::EffectivityWitness;

pub struct Context {
    pub group: Group,
    pub arrangement: Arrangement,
    pub invariants: FundamentalInvariants,
    psi30: OnceLock<std::result::Result<(Psi30System, IrreducibilityReport), String>>,
    witness_c: OnceLock<std::result::Result<EffectivityWitness, String>>,
}

static SHARED: OnceLock<std::result::Result<Context, String>> = OnceLock::new();

impl Context {
    pub fn build() -> Result<Self> {
        let group = Group::generate()?;
        let arrangement = Arrangement::build(&group)?;
        let invariants = fundamental_invariants(&group, &arrangement)?;
        Ok(Context { group, arrangement, invariants, psi30: OnceLock::new(), witness_c: OnceLock::new() })
    }

    /// A process-wide instance.
    pub fn shared() -> Result<&'static Context> {
        SHARED
            .get_or_init(|| Context::build().map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| Error::Verification(e.clone()))
    }

    pub fn psi(&self) -> PsiForms {
        PsiForms::new(&self.invariants)
    }

    fn psi30_pair(&self) -> Result<&(Psi30System, IrreducibilityReport)> {
        self.psi30
            .get_or_init(|| {
                let sys = build_psi30(&self.invariants, &self.arrangement).map_err(|e| e.to_string())?;
                let rep = irreducibility_certificate(&sys, &self.arrangement);
                Ok((sys, rep))
            })
            .as_ref()
            .map_err(|e| Error::Verification(e.clone()))
    }

    pub fn psi30(&self) -> Result<&Psi30System> {
        Ok(&self.psi30_pair()?.0)
    }

    pub fn psi30_irreducibility(&self) -> Result<&IrreducibilityReport> {
        Ok(&self.psi30_pair()?.1)
    }

    /// `phi15`: the arrangement itself, whose lines form one orbit.
    pub fn witness_a(&self) -> Result<EffectivityWitness> {
        let lines_one_orbit = {
            let l0 = self.arrangement.lines[0].monic();
            let orbit: std::collections::HashSet<_> =
                self.group.elements().iter().map(|g| l0.act(&g.entries).monic()).collect();
            orbit.len() == self.arrangement.lines.len()
        };
        let reason = lines_one_orbit.then(|| "the 15 lines form a single orbit".to_string());
        witness_for("phi15", &self.invariants.phi15, &self.arrangement, &self.group, reason)
    }

    /// `phi6`: six lines, polar to the quintuple points.
    pub fn witness_b(&self) -> Result<EffectivityWitness> {
        let quintuples = self.arrangement.points_of(PointClass::Quintuple);
        let reason = single_orbit_lines(&quintuples, &self.group)
            .then(|| "the 6 polar lines of the quintuple points form a single orbit".to_string());
        witness_for("phi6", &self.invariants.phi6, &self.arrangement, &self.group, reason)
    }

    pub fn witness_c(&self) -> Result<EffectivityWitness> {
        self.witness_c
            .get_or_init(|| {
                let (sys, rep) = self.psi30_pair().map_err(|e| e.to_string())?;
                let reason = rep.passed().then(|| match &rep.witness {
                    Ok(w) => format!("weighted form has no factor linear in w10 ({w:?}); no mirror line divides it"),
                    Err(_) => unreachable!("passed implies a witness"),
                });
                witness_for("psi30", &sys.psi30, &self.arrangement, &self.group, reason).map_err(|e| e.to_string())
            })
            .clone()
            .map_err(Error::Verification)
    }

    /// `psi6'`, double at the triple points.
    pub fn witness_triples(&self) -> Result<EffectivityWitness> {
        let f = self.psi().psi6p;
        let reason = weighted_irreducibility(&f, &self.invariants.generators(), &self.arrangement)?;
        witness_for("psi6'", &f, &self.arrangement, &self.group, reason)
    }

    /// The degree-12 invariant with multiplicity 5 at the quintuple points.
    pub fn witness_quintuples(&self) -> Result<EffectivityWitness> {
        let gens = self.invariants.generators();
        let sub = invariant_subspace(&gens, &self.arrangement, 12, [5, 0, 0])?;
        let [f] = sub.forms.as_slice() else {
            return Err(Error::Verification(format!(
                "expected a single degree-12 invariant, found {}",
                sub.dimension()
            )));
        };
        let reason = weighted_irreducibility(f, &gens, &self.arrangement)?;
        witness_for("q12", f, &self.arrangement, &self.group, reason)
    }
}
