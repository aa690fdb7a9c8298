//! Symmetry-resolved probabilities at SPT fixed points of finite Abelian
//! groups, their degeneracy families, and how a Floquet pumped charge cycles
//! those families.

mod defect;
mod families;
mod group;

pub use defect::{
    cocycle, defect_table, deformed_sym_resolved, fspt_count, gauge_invariance_check,
    protected_signature, signature, signature_of_values, sym_resolved_from_defects,
    zn_zn_signature, Coboundary, DefectTable, GaugeFailure, GaugeReport, SPTClass, Signature,
};
pub use families::{cycle_families, families, FamilyPartition};
pub use group::{character, AbelianGroup, Element, SymResolvedSpectrum};
