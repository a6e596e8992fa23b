/// Rectangular evaluation grid over the (x, y) plane.
///
/// Node order is row-major with x as the outer loop and y inner, which fixes
/// the layout of every exported field file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn square(lo: f64, hi: f64, n: usize) -> Self {
        Grid {
            x_min: lo,
            x_max: hi,
            y_min: lo,
            y_max: hi,
            nx: n,
            ny: n,
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn coordinate(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
        if n <= 1 {
            lo
        } else {
            lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
        }
    }

    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.nx {
            let x = Self::coordinate(self.x_min, self.x_max, self.nx, i);
            for j in 0..self.ny {
                let y = Self::coordinate(self.y_min, self.y_max, self.ny, j);
                out.push((x, y));
            }
        }
        out
    }
}

impl Default for Grid {
    /// The conventional reporting window: [−1, 1]² at 21×21.
    fn default() -> Self {
        Grid::square(-1.0, 1.0, 21)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_are_x_outer_y_inner() {
        let g = Grid {
            x_min: 0.0,
            x_max: 1.0,
            y_min: 10.0,
            y_max: 12.0,
            nx: 2,
            ny: 3,
        };
        let nodes = g.nodes();
        assert_eq!(nodes.len(), 6);
        assert_eq!(nodes[0], (0.0, 10.0));
        assert_eq!(nodes[1], (0.0, 11.0));
        assert_eq!(nodes[2], (0.0, 12.0));
        assert_eq!(nodes[3], (1.0, 10.0));
    }

    #[test]
    fn endpoints_are_hit_exactly() {
        let g = Grid::square(-1.0, 1.0, 21);
        let nodes = g.nodes();
        assert_eq!(nodes.first().unwrap().0, -1.0);
        assert_eq!(nodes.last().unwrap().0, 1.0);
        assert_eq!(nodes.last().unwrap().1, 1.0);
    }

    #[test]
    fn degenerate_single_column_collapses_to_min() {
        let g = Grid {
            x_min: 0.5,
            x_max: 2.0,
            y_min: -1.0,
            y_max: 1.0,
            nx: 1,
            ny: 2,
        };
        let nodes = g.nodes();
        assert_eq!(nodes[0].0, 0.5);
        assert_eq!(nodes[1].0, 0.5);
    }
}
