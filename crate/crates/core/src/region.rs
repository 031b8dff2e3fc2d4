//! Cooling/heating map over true coherence and assumed coherence.

use crate::bloch::{epsilon_after_rotation, gamma_inf};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Cools,
    Heats,
    /// Polarization unchanged, or the heating node just below the threshold curve.
    Boundary,
}

impl Cell {
    pub fn label(self) -> &'static str {
        match self {
            Cell::Cools => "cools",
            Cell::Heats => "heats",
            Cell::Boundary => "boundary",
        }
    }
}

/// Node classification on a uniform `resolution x resolution` grid over
/// `(gamma, gamma_rot)` in `[0, 1]^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionMap {
    pub pol_v: f64,
    pub resolution: usize,
    /// Row-major in `gamma`: `cells[i * resolution + j]` is `(gamma_i, gamma_rot_j)`.
    pub cells: Vec<Cell>,
}

const FLAT: f64 = 1e-12;

impl RegionMap {
    pub fn coordinate(&self, index: usize) -> f64 {
        index as f64 / (self.resolution - 1) as f64
    }

    pub fn step(&self) -> f64 {
        1.0 / (self.resolution - 1) as f64
    }

    pub fn get(&self, gamma_index: usize, gamma_rot_index: usize) -> Cell {
        self.cells[gamma_index * self.resolution + gamma_rot_index]
    }

    /// `gamma` of the boundary node in each column, `None` when the column has none.
    pub fn boundary_curve(&self) -> Vec<Option<f64>> {
        (0..self.resolution)
            .map(|j| {
                (0..self.resolution)
                    .find(|&i| self.get(i, j) == Cell::Boundary)
                    .map(|i| self.coordinate(i))
            })
            .collect()
    }

    /// Largest distance between the boundary nodes and the threshold curve,
    /// over columns with nonzero assumed coherence.
    pub fn boundary_deviation(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (j, found) in self.boundary_curve().into_iter().enumerate().skip(1) {
            let threshold = gamma_inf(self.pol_v, self.coordinate(j))?;
            match found {
                Some(g) => worst = worst.max((g - threshold).abs()),
                None if threshold > 1.0 => {}
                None => worst = f64::INFINITY,
            }
        }
        Ok(worst)
    }
}

pub fn region_map(pol_v: f64, resolution: usize) -> Result<RegionMap> {
    if resolution < 16 {
        return Err(Error::param("resolution", resolution as f64, "must be at least 16"));
    }
    if !(0.0..1.0).contains(&pol_v) {
        return Err(Error::param("pol_v", pol_v, "must lie in [0, 1)"));
    }
    let coord = |i: usize| i as f64 / (resolution - 1) as f64;
    let mut gain = vec![0.0; resolution * resolution];
    for i in 0..resolution {
        for j in 0..resolution {
            gain[i * resolution + j] = epsilon_after_rotation(pol_v, coord(i), coord(j))? - pol_v;
        }
    }
    let cells = (0..resolution * resolution)
        .map(|k| {
            let d = gain[k];
            if d.abs() <= FLAT {
                return Cell::Boundary;
            }
            if d > 0.0 {
                return Cell::Cools;
            }
            let above = k + resolution;
            if above < gain.len() && gain[above] >= -FLAT {
                Cell::Boundary
            } else {
                Cell::Heats
            }
        })
        .collect();
    Ok(RegionMap {
        pol_v,
        resolution,
        cells,
    })
}
