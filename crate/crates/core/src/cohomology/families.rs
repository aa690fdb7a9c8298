//! Character families: charges whose characters agree on the support `H`.

use std::collections::BTreeMap;

use super::defect::DefectTable;
use super::group::{AbelianGroup, Element};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyPartition {
    group: AbelianGroup,
    /// Label (the lexicographically smallest member) to sorted members.
    pub families: BTreeMap<Element, Vec<Element>>,
    label_of: BTreeMap<Element, Element>,
}

impl FamilyPartition {
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn label_of(&self, q: &[usize]) -> Option<&Element> {
        self.label_of.get(q)
    }

    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    pub fn members(&self, label: &[usize]) -> Option<&[Element]> {
        self.families.get(label).map(Vec::as_slice)
    }
}

pub fn families(table: &DefectTable) -> Result<FamilyPartition> {
    let group = table.group().clone();
    let h = table.h_elements();
    // Characters agree on H iff their exact phase numerators agree on H.
    let mut by_key: BTreeMap<Vec<usize>, Vec<Element>> = BTreeMap::new();
    for q in group.elements() {
        let key: Vec<usize> = h.iter().map(|g| group.pairing_numerator(&q, g)).collect();
        by_key.entry(key).or_default().push(q);
    }
    let mut families = BTreeMap::new();
    let mut label_of = BTreeMap::new();
    for members in by_key.into_values() {
        let label = members[0].clone();
        for q in &members {
            label_of.insert(q.clone(), label.clone());
        }
        families.insert(label, members);
    }
    let size = group.order() / h.len();
    if families.values().any(|m| m.len() != size) {
        return Err(Error::Invariant(format!(
            "families do not all have |G|/|H| = {size} members"
        )));
    }
    Ok(FamilyPartition {
        group,
        families,
        label_of,
    })
}

/// The permutation of family labels induced by shifting every charge by `c`.
pub fn cycle_families(
    partition: &FamilyPartition,
    c: &[usize],
) -> Result<BTreeMap<Element, Element>> {
    let group = &partition.group;
    group.check(c)?;
    let mut perm = BTreeMap::new();
    for (label, members) in &partition.families {
        let image = partition.label_of[&group.add(&members[0], c)].clone();
        perm.insert(label.clone(), image);
    }
    Ok(perm)
}
