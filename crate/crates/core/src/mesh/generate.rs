use super::{CenterRule, Mesh};
use crate::scalar::{Point, Real};

/// Criss-cross triangulation of `(0,1)²`: a `2^level × 2^level` grid of
/// squares, each split into four triangles by its diagonals.
pub fn generate_square_triangular<T: Real>(level: u32, center: CenterRule) -> Mesh<T> {
    let n = 1usize << level;
    let grid = SquareGrid::new([T::zero(), T::zero()], T::one() / T::from_usize_lossy(n), n, n, |_, _| true);
    grid.criss_cross(center)
}

/// `2^level × 2^level` squares of `(0,1)²`, each cut along its
/// south-west to north-east diagonal.
pub fn generate_square_diagonal<T: Real>(level: u32, center: CenterRule) -> Mesh<T> {
    let n = 1usize << level;
    let grid = SquareGrid::new([T::zero(), T::zero()], T::one() / T::from_usize_lossy(n), n, n, |_, _| true);
    grid.diagonal(center)
}

/// Uniform `2^level × 2^level` squares of `(0,1)²`, centers at mass centers.
pub fn generate_square_rectangular<T: Real>(level: u32) -> Mesh<T> {
    generate_square_grid(1usize << level)
}

/// Uniform `n × n` squares of `(0,1)²`.
pub fn generate_square_grid<T: Real>(n: usize) -> Mesh<T> {
    let grid = SquareGrid::new([T::zero(), T::zero()], T::one() / T::from_usize_lossy(n), n, n, |_, _| true);
    grid.rectangles()
}

/// Criss-cross triangulation of `(-1,1)² \ [0,1)×(-1,0]`: the three unit
/// squares are each split into `2^level × 2^level` criss-cross squares.
pub fn generate_lshape_triangular<T: Real>(level: u32, center: CenterRule) -> Mesh<T> {
    let n = 1usize << level;
    let grid = SquareGrid::new(
        [-T::one(), -T::one()],
        T::one() / T::from_usize_lossy(n),
        2 * n,
        2 * n,
        |i, j| !(i >= n && j < n),
    );
    grid.criss_cross(center)
}

/// One-diagonal triangulation of the L-shape on the same square grid as
/// [`generate_lshape_triangular`].
pub fn generate_lshape_diagonal<T: Real>(level: u32, center: CenterRule) -> Mesh<T> {
    let n = 1usize << level;
    let grid = SquareGrid::new(
        [-T::one(), -T::one()],
        T::one() / T::from_usize_lossy(n),
        2 * n,
        2 * n,
        |i, j| !(i >= n && j < n),
    );
    grid.diagonal(center)
}

/// Selected squares of a uniform grid with compacted vertex numbering.
struct SquareGrid<T> {
    origin: Point<T>,
    step: T,
    nx: usize,
    ny: usize,
    squares: Vec<(usize, usize)>,
    vertex_id: Vec<usize>,
    vertices: Vec<Point<T>>,
}

impl<T: Real> SquareGrid<T> {
    fn new(origin: Point<T>, step: T, nx: usize, ny: usize, keep: impl Fn(usize, usize) -> bool) -> Self {
        let mut squares = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                if keep(i, j) {
                    squares.push((i, j));
                }
            }
        }
        let mut used = vec![false; (nx + 1) * (ny + 1)];
        for &(i, j) in &squares {
            for (di, dj) in [(0, 0), (1, 0), (1, 1), (0, 1)] {
                used[(j + dj) * (nx + 1) + i + di] = true;
            }
        }
        let mut vertex_id = vec![usize::MAX; used.len()];
        let mut vertices = Vec::new();
        for j in 0..=ny {
            for i in 0..=nx {
                let g = j * (nx + 1) + i;
                if used[g] {
                    vertex_id[g] = vertices.len();
                    vertices.push([
                        origin[0] + step * T::from_usize_lossy(i),
                        origin[1] + step * T::from_usize_lossy(j),
                    ]);
                }
            }
        }
        Self { origin, step, nx, ny, squares, vertex_id, vertices }
    }

    fn corner(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= self.nx && j <= self.ny);
        self.vertex_id[j * (self.nx + 1) + i]
    }

    /// `[v00, v10, v11, v01]`, counter-clockwise.
    fn square_corners(&self, i: usize, j: usize) -> [usize; 4] {
        [self.corner(i, j), self.corner(i + 1, j), self.corner(i + 1, j + 1), self.corner(i, j + 1)]
    }

    fn rectangles(self) -> Mesh<T> {
        let cycles = self.squares.iter().map(|&(i, j)| self.square_corners(i, j).to_vec()).collect();
        Mesh::from_cells(self.vertices, cycles, CenterRule::MassCenter)
    }

    fn criss_cross(mut self, center: CenterRule) -> Mesh<T> {
        let half = T::lit(0.5);
        let mut cycles = Vec::with_capacity(4 * self.squares.len());
        let squares = std::mem::take(&mut self.squares);
        for &(i, j) in &squares {
            let c = self.vertices.len();
            self.vertices.push([
                self.origin[0] + self.step * (T::from_usize_lossy(i) + half),
                self.origin[1] + self.step * (T::from_usize_lossy(j) + half),
            ]);
            let [a, b, d, e] = self.square_corners(i, j);
            cycles.push(vec![a, b, c]);
            cycles.push(vec![b, d, c]);
            cycles.push(vec![d, e, c]);
            cycles.push(vec![e, a, c]);
        }
        Mesh::from_cells(self.vertices, cycles, center)
    }

    fn diagonal(self, center: CenterRule) -> Mesh<T> {
        let mut cycles = Vec::with_capacity(2 * self.squares.len());
        for &(i, j) in &self.squares {
            let [a, b, d, e] = self.square_corners(i, j);
            cycles.push(vec![a, b, d]);
            cycles.push(vec![a, d, e]);
        }
        Mesh::from_cells(self.vertices, cycles, center)
    }
}
