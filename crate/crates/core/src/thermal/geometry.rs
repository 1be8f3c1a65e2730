use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lattice shapes supported at desk scale. Patch sites are numbered
/// row-major: `site = row * cols + col`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Geometry {
    Chain { sites: usize },
    Ring { sites: usize },
    Patch { rows: usize, cols: usize },
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Geometry::Chain { sites } => sites >= 1,
            Geometry::Ring { sites } => sites >= 3,
            Geometry::Patch { rows, cols } => rows >= 1 && cols >= 1,
        };
        if !ok {
            return Err(Error::MalformedGeometry(format!("{self:?}")));
        }
        Ok(())
    }

    pub fn site_count(&self) -> usize {
        match *self {
            Geometry::Chain { sites } | Geometry::Ring { sites } => sites,
            Geometry::Patch { rows, cols } => rows * cols,
        }
    }

    /// Graph distance between two sites.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        match *self {
            Geometry::Chain { .. } => a.abs_diff(b),
            Geometry::Ring { sites } => {
                let d = a.abs_diff(b);
                d.min(sites - d)
            }
            Geometry::Patch { cols, .. } => {
                (a / cols).abs_diff(b / cols) + (a % cols).abs_diff(b % cols)
            }
        }
    }

    /// Nearest-neighbor bonds `(left, right)` / `(upper, lower)`, each once.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        match *self {
            Geometry::Chain { sites } => (0..sites.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
            Geometry::Ring { sites } => (0..sites).map(|i| (i, (i + 1) % sites)).collect(),
            Geometry::Patch { .. } => {
                let mut bonds = self.horizontal_bonds();
                bonds.extend(self.vertical_bonds());
                bonds
            }
        }
    }

    /// Horizontal patch bonds `(left, right)`; chain/ring bonds otherwise.
    pub fn horizontal_bonds(&self) -> Vec<(usize, usize)> {
        match *self {
            Geometry::Patch { rows, cols } => (0..rows)
                .flat_map(|r| (0..cols.saturating_sub(1)).map(move |c| (r * cols + c, r * cols + c + 1)))
                .collect(),
            _ => self.bonds(),
        }
    }

    /// Vertical patch bonds `(upper, lower)`; empty for one-dimensional shapes.
    pub fn vertical_bonds(&self) -> Vec<(usize, usize)> {
        match *self {
            Geometry::Patch { rows, cols } => (0..rows.saturating_sub(1))
                .flat_map(|r| (0..cols).map(move |c| (r * cols + c, (r + 1) * cols + c)))
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn neighbors(&self, site: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .bonds()
            .into_iter()
            .filter_map(|(a, b)| {
                if a == site {
                    Some(b)
                } else if b == site {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Contiguous regions: intervals on a chain, arcs on a ring, rectangles on
    /// a patch. The empty set and the whole lattice are excluded.
    pub fn contiguous_regions(&self) -> Vec<Vec<usize>> {
        let n = self.site_count();
        match *self {
            Geometry::Chain { sites } => {
                let mut out = Vec::new();
                for start in 0..sites {
                    for end in start + 1..=sites {
                        if end - start < sites {
                            out.push((start..end).collect());
                        }
                    }
                }
                out
            }
            Geometry::Ring { sites } => {
                let mut out = Vec::new();
                for len in 1..sites {
                    for start in 0..sites {
                        let mut arc: Vec<usize> = (0..len).map(|k| (start + k) % sites).collect();
                        arc.sort_unstable();
                        out.push(arc);
                    }
                }
                out
            }
            Geometry::Patch { rows, cols } => {
                let mut out = Vec::new();
                for r0 in 0..rows {
                    for r1 in r0 + 1..=rows {
                        for c0 in 0..cols {
                            for c1 in c0 + 1..=cols {
                                let rect: Vec<usize> = (r0..r1)
                                    .flat_map(|r| (c0..c1).map(move |c| r * cols + c))
                                    .collect();
                                if rect.len() < n {
                                    out.push(rect);
                                }
                            }
                        }
                    }
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bonds_and_distances() {
        let ring = Geometry::Ring { sites: 5 };
        assert_eq!(ring.bonds().len(), 5);
        assert_eq!(ring.distance(0, 4), 1);
        assert_eq!(ring.neighbors(0), vec![1, 4]);
        let patch = Geometry::Patch { rows: 2, cols: 3 };
        assert_eq!(patch.horizontal_bonds(), vec![(0, 1), (1, 2), (3, 4), (4, 5)]);
        assert_eq!(patch.vertical_bonds(), vec![(0, 3), (1, 4), (2, 5)]);
        assert_eq!(patch.distance(0, 5), 3);
        assert!(Geometry::Ring { sites: 2 }.validate().is_err());
    }

    #[test]
    fn contiguous_region_counts() {
        assert_eq!(Geometry::Chain { sites: 4 }.contiguous_regions().len(), 9);
        assert_eq!(Geometry::Ring { sites: 4 }.contiguous_regions().len(), 12);
        // 3x3: 36 rectangles minus the full patch.
        assert_eq!(Geometry::Patch { rows: 3, cols: 3 }.contiguous_regions().len(), 35);
    }
}
