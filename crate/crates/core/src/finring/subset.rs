use std::cmp::Ordering;
use std::fmt;

/// A subset of a finite carrier, kept as a sorted member list plus a membership mask.
///
/// Ordering is canonical: by size, then lexicographically by member list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl Subset {
    pub fn from_mask(mask: Vec<bool>) -> Self {
        let members = mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        Subset { members, mask }
    }

    pub fn from_members(carrier: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = vec![false; carrier];
        for m in members {
            mask[m] = true;
        }
        Self::from_mask(mask)
    }

    pub fn full(carrier: usize) -> Self {
        Self::from_mask(vec![true; carrier])
    }

    pub fn singleton(carrier: usize, x: usize) -> Self {
        Self::from_members(carrier, [x])
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn carrier_size(&self) -> usize {
        self.mask.len()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.mask.len()
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.members.len() <= other.members.len() && self.members.iter().all(|&m| other.mask[m])
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        Subset::from_mask(self.mask.iter().zip(&other.mask).map(|(a, b)| *a && *b).collect())
    }

    /// Image of the subset under a map on the carrier.
    pub fn image(&self, map: &[usize], codomain: usize) -> Subset {
        Subset::from_members(codomain, self.members.iter().map(|&m| map[m]))
    }

    /// Preimage under a map into this subset's carrier.
    pub fn preimage(&self, map: &[usize]) -> Subset {
        Subset::from_mask(map.iter().map(|&y| self.mask[y]).collect())
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.members.len().cmp(&other.members.len()).then_with(|| self.members.cmp(&other.members))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.members)
    }
}
