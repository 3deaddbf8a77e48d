//! Periodic 2D Cartesian primal/dual mesh and the mimetic operators.
//!
//! Primal cells `c = (i, j)` have centres `x_c = (x0 + (i+½)Δx, y0 + (j+½)Δy)`
//! and vertices `p = (i, j)` sit at `x_p = (x0 + iΔx, y0 + jΔy)`. Under
//! periodic identification there are `nx·ny` of each, both stored row-major
//! (`i + nx·j`) with components interleaved per location.
//!
//! The corner normals `l_pc n_pc = ½(±Δy, ±Δx, 0)` point from the cell centre
//! towards the corner, and `n_cp = −n_pc`. Each operator is a 4-point sum over
//! the corners of a cell (cell-targeted, `∇_c^p`) or over the cells around a
//! vertex (vertex-targeted, `∇_p^c`). With the four neighbours labelled
//! lower-left, lower-right, upper-left and upper-right, both nabla operators
//! reduce to the same pair of difference stencils
//!
//! ```text
//! Dx f = ((f_ur + f_lr) − (f_ul + f_ll)) / (2Δx)
//! Dy f = ((f_ur + f_ul) − (f_lr + f_ll)) / (2Δy)
//! ```
//!
//! so `grad = (Dx, Dy, 0)`, `div A = Dx A1 + Dy A2` and
//! `curl A = (Dy A3, −Dx A3, Dx A2 − Dy A1)`.

use std::marker::PhantomData;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Marker for fields stored at primal cell centres.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cells;
/// Marker for fields stored at primal vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vertices;

#[derive(Debug, Clone, PartialEq)]
pub struct StaggeredMesh {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub dx: f64,
    pub dy: f64,
}

impl StaggeredMesh {
    pub fn new(nx: usize, ny: usize, x_range: [f64; 2], y_range: [f64; 2]) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidParameter(format!(
                "mesh needs at least one cell per direction, got {nx}x{ny}"
            )));
        }
        let [x0, x1] = x_range;
        let [y0, y1] = y_range;
        if !(x1 > x0) || !(y1 > y0) || !(x0.is_finite() && x1.is_finite() && y0.is_finite() && y1.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "empty domain [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        Ok(Self {
            nx,
            ny,
            x0,
            x1,
            y0,
            y1,
            dx: (x1 - x0) / nx as f64,
            dy: (y1 - y0) / ny as f64,
        })
    }

    /// Unit square `[0,1]²`.
    pub fn unit(nx: usize, ny: usize) -> Result<Self> {
        Self::new(nx, ny, [0.0, 1.0], [0.0, 1.0])
    }

    /// Number of cells, equal to the number of vertices.
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `|Ω_c|`.
    pub fn cell_volume(&self) -> f64 {
        self.dx * self.dy
    }

    /// `|Ω_p|`.
    pub fn dual_volume(&self) -> f64 {
        self.dx * self.dy
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i + self.nx * j
    }

    pub fn cell_center(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.x0 + (i as f64 + 0.5) * self.dx,
            self.y0 + (j as f64 + 0.5) * self.dy,
        ]
    }

    pub fn vertex(&self, i: usize, j: usize) -> [f64; 2] {
        [self.x0 + i as f64 * self.dx, self.y0 + j as f64 * self.dy]
    }

    /// Vertex indices around cell `(i, j)`: `[ll, lr, ul, ur]`.
    pub fn cell_corners(&self, i: usize, j: usize) -> [usize; 4] {
        let ip = (i + 1) % self.nx;
        let jp = (j + 1) % self.ny;
        [
            self.index(i, j),
            self.index(ip, j),
            self.index(i, jp),
            self.index(ip, jp),
        ]
    }

    /// Cell indices around vertex `(i, j)`: `[ll, lr, ul, ur]`.
    pub fn vertex_cells(&self, i: usize, j: usize) -> [usize; 4] {
        let im = (i + self.nx - 1) % self.nx;
        let jm = (j + self.ny - 1) % self.ny;
        [
            self.index(im, jm),
            self.index(i, jm),
            self.index(im, j),
            self.index(i, j),
        ]
    }

    /// Corner normals `l_pc n_pc` of a cell in `[ll, lr, ul, ur]` order.
    pub fn corner_normals(&self) -> [[f64; 3]; 4] {
        let (hx, hy) = (0.5 * self.dy, 0.5 * self.dx);
        [[-hx, -hy, 0.0], [hx, -hy, 0.0], [-hx, hy, 0.0], [hx, hy, 0.0]]
    }

    /// Iterates `(i, j, index)` in storage order.
    pub fn locations(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| (i, j, i + self.nx * j)))
    }
}

/// A field with `ncomp` interleaved components per location.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<L> {
    nx: usize,
    ny: usize,
    ncomp: usize,
    data: Vec<f64>,
    _loc: PhantomData<L>,
}

pub type CellField = Field<Cells>;
pub type VertexField = Field<Vertices>;

impl<L> Field<L> {
    pub fn zeros(mesh: &StaggeredMesh, ncomp: usize) -> Self {
        Self {
            nx: mesh.nx,
            ny: mesh.ny,
            ncomp,
            data: vec![0.0; mesh.len() * ncomp],
            _loc: PhantomData,
        }
    }

    pub fn from_vec(mesh: &StaggeredMesh, ncomp: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != mesh.len() * ncomp {
            return Err(Error::ShapeMismatch(format!(
                "{} values for {} locations with {} components",
                data.len(),
                mesh.len(),
                ncomp
            )));
        }
        Ok(Self {
            nx: mesh.nx,
            ny: mesh.ny,
            ncomp,
            data,
            _loc: PhantomData,
        })
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn at(&self, loc: usize) -> &[f64] {
        &self.data[loc * self.ncomp..(loc + 1) * self.ncomp]
    }

    pub fn at_mut(&mut self, loc: usize) -> &mut [f64] {
        &mut self.data[loc * self.ncomp..(loc + 1) * self.ncomp]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    fn check(&self, mesh: &StaggeredMesh, ncomp: usize, what: &str) -> Result<()> {
        if self.nx != mesh.nx || self.ny != mesh.ny {
            return Err(Error::ShapeMismatch(format!(
                "{what}: field is {}x{}, mesh is {}x{}",
                self.nx, self.ny, mesh.nx, mesh.ny
            )));
        }
        if self.ncomp != ncomp {
            return Err(Error::ShapeMismatch(format!(
                "{what}: expected {ncomp} components, got {}",
                self.ncomp
            )));
        }
        Ok(())
    }
}

/// Which of the two nabla operators to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    /// `∇_c^p`: vertex data to cells.
    Cells,
    /// `∇_p^c`: cell data to vertices.
    Vertices,
}

/// Low-level stencils on interleaved data. `src` has stride `src_stride`;
/// the operator reads components starting at `off`, and *adds* `scale`
/// times its result into `dst` (stride `dst_stride`, offset `dst_off`).
///
/// These are the building blocks of the field operators below and of the
/// staggered scheme's coupling operator.
#[derive(Debug, Clone, Copy)]
pub struct Stencil<'a> {
    mesh: &'a StaggeredMesh,
    target: Target,
}

impl<'a> Stencil<'a> {
    /// `∇_c^p`: reads vertex data, writes cell data.
    pub fn to_cells(mesh: &'a StaggeredMesh) -> Self {
        Self {
            mesh,
            target: Target::Cells,
        }
    }

    /// `∇_p^c`: reads cell data, writes vertex data.
    pub fn to_vertices(mesh: &'a StaggeredMesh) -> Self {
        Self {
            mesh,
            target: Target::Vertices,
        }
    }

    #[inline]
    fn neighbours(&self, i: usize, j: usize) -> [usize; 4] {
        match self.target {
            Target::Cells => self.mesh.cell_corners(i, j),
            Target::Vertices => self.mesh.vertex_cells(i, j),
        }
    }

    #[inline]
    fn dx_dy(&self, src: &[f64], stride: usize, comp: usize, nb: &[usize; 4]) -> (f64, f64) {
        let [ll, lr, ul, ur] = nb.map(|n| src[n * stride + comp]);
        (
            ((ur + lr) - (ul + ll)) / (2.0 * self.mesh.dx),
            ((ur + ul) - (lr + ll)) / (2.0 * self.mesh.dy),
        )
    }

    /// `dst[·, dst_off..dst_off+3] += scale · grad(src[·, off])`.
    #[allow(clippy::too_many_arguments)]
    pub fn add_grad(
        &self,
        src: &[f64],
        stride: usize,
        off: usize,
        dst: &mut [f64],
        dst_stride: usize,
        dst_off: usize,
        scale: f64,
    ) {
        for (i, j, loc) in self.mesh.locations() {
            let nb = self.neighbours(i, j);
            let (gx, gy) = self.dx_dy(src, stride, off, &nb);
            let d = &mut dst[loc * dst_stride + dst_off..];
            d[0] += scale * gx;
            d[1] += scale * gy;
        }
    }

    /// `dst[·, dst_off] += scale · div(src[·, off..off+3])`.
    #[allow(clippy::too_many_arguments)]
    pub fn add_div(
        &self,
        src: &[f64],
        stride: usize,
        off: usize,
        dst: &mut [f64],
        dst_stride: usize,
        dst_off: usize,
        scale: f64,
    ) {
        for (i, j, loc) in self.mesh.locations() {
            let nb = self.neighbours(i, j);
            let (a1x, _) = self.dx_dy(src, stride, off, &nb);
            let (_, a2y) = self.dx_dy(src, stride, off + 1, &nb);
            dst[loc * dst_stride + dst_off] += scale * (a1x + a2y);
        }
    }

    /// `dst[·, dst_off..dst_off+3] += scale · curl(src[·, off..off+3])`.
    #[allow(clippy::too_many_arguments)]
    pub fn add_curl(
        &self,
        src: &[f64],
        stride: usize,
        off: usize,
        dst: &mut [f64],
        dst_stride: usize,
        dst_off: usize,
        scale: f64,
    ) {
        for (i, j, loc) in self.mesh.locations() {
            let nb = self.neighbours(i, j);
            let (_, a1y) = self.dx_dy(src, stride, off, &nb);
            let (a2x, _) = self.dx_dy(src, stride, off + 1, &nb);
            let (a3x, a3y) = self.dx_dy(src, stride, off + 2, &nb);
            let d = &mut dst[loc * dst_stride + dst_off..];
            d[0] += scale * a3y;
            d[1] -= scale * a3x;
            d[2] += scale * (a2x - a1y);
        }
    }
}

fn grad_into<S, T>(mesh: &StaggeredMesh, st: Stencil<'_>, f: &Field<S>) -> Result<Field<T>> {
    f.check(mesh, 1, "gradient")?;
    let mut out = Field::<T>::zeros(mesh, 3);
    st.add_grad(&f.data, 1, 0, &mut out.data, 3, 0, 1.0);
    Ok(out)
}

fn div_into<S, T>(mesh: &StaggeredMesh, st: Stencil<'_>, a: &Field<S>) -> Result<Field<T>> {
    a.check(mesh, 3, "divergence")?;
    let mut out = Field::<T>::zeros(mesh, 1);
    st.add_div(&a.data, 3, 0, &mut out.data, 1, 0, 1.0);
    Ok(out)
}

fn curl_into<S, T>(mesh: &StaggeredMesh, st: Stencil<'_>, a: &Field<S>) -> Result<Field<T>> {
    a.check(mesh, 3, "curl")?;
    let mut out = Field::<T>::zeros(mesh, 3);
    st.add_curl(&a.data, 3, 0, &mut out.data, 3, 0, 1.0);
    Ok(out)
}

/// `∇_c^p φ_p`: vertex scalar to cell vector.
pub fn grad_cp(mesh: &StaggeredMesh, phi: &VertexField) -> Result<CellField> {
    grad_into(mesh, Stencil::to_cells(mesh), phi)
}

/// `∇_p^c φ_c`: cell scalar to vertex vector.
pub fn grad_pc(mesh: &StaggeredMesh, phi: &CellField) -> Result<VertexField> {
    grad_into(mesh, Stencil::to_vertices(mesh), phi)
}

/// `∇_c^p · A_p`.
pub fn div_cp(mesh: &StaggeredMesh, a: &VertexField) -> Result<CellField> {
    div_into(mesh, Stencil::to_cells(mesh), a)
}

/// `∇_p^c · A_c`.
pub fn div_pc(mesh: &StaggeredMesh, a: &CellField) -> Result<VertexField> {
    div_into(mesh, Stencil::to_vertices(mesh), a)
}

/// `∇_c^p × A_p`.
pub fn curl_cp(mesh: &StaggeredMesh, a: &VertexField) -> Result<CellField> {
    curl_into(mesh, Stencil::to_cells(mesh), a)
}

/// `∇_p^c × A_c`.
pub fn curl_pc(mesh: &StaggeredMesh, a: &CellField) -> Result<VertexField> {
    curl_into(mesh, Stencil::to_vertices(mesh), a)
}

/// Maxima of the four composition identities over random fields.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IdentityReport {
    /// `max |∇_c^p × ∇_p^c φ_c|`
    pub curl_grad_cells: f64,
    /// `max |∇_p^c × ∇_c^p φ_p|`
    pub curl_grad_vertices: f64,
    /// `max |∇_c^p · ∇_p^c × A_c|`
    pub div_curl_cells: f64,
    /// `max |∇_p^c · ∇_c^p × A_p|`
    pub div_curl_vertices: f64,
}

impl IdentityReport {
    pub fn max(&self) -> f64 {
        self.curl_grad_cells
            .max(self.curl_grad_vertices)
            .max(self.div_curl_cells)
            .max(self.div_curl_vertices)
    }

    fn merge(&mut self, other: &IdentityReport) {
        self.curl_grad_cells = self.curl_grad_cells.max(other.curl_grad_cells);
        self.curl_grad_vertices = self.curl_grad_vertices.max(other.curl_grad_vertices);
        self.div_curl_cells = self.div_curl_cells.max(other.div_curl_cells);
        self.div_curl_vertices = self.div_curl_vertices.max(other.div_curl_vertices);
    }
}

/// Evaluates the composition identities for the given fields.
pub fn identity_residuals(
    mesh: &StaggeredMesh,
    phi_c: &CellField,
    phi_p: &VertexField,
    a_c: &CellField,
    a_p: &VertexField,
) -> Result<IdentityReport> {
    Ok(IdentityReport {
        curl_grad_cells: curl_cp(mesh, &grad_pc(mesh, phi_c)?)?.max_abs(),
        curl_grad_vertices: curl_pc(mesh, &grad_cp(mesh, phi_p)?)?.max_abs(),
        div_curl_cells: div_cp(mesh, &curl_pc(mesh, a_c)?)?.max_abs(),
        div_curl_vertices: div_pc(mesh, &curl_cp(mesh, a_p)?)?.max_abs(),
    })
}

/// Runs [`identity_residuals`] on `samples` random field sets with entries
/// uniform in `[-scale, scale]`, seeded deterministically.
pub fn identity_suite(mesh: &StaggeredMesh, samples: usize, scale: f64, seed: u64) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random = |n: usize| -> Vec<f64> { (0..n).map(|_| rng.random_range(-scale..=scale)).collect() };
    let mut report = IdentityReport::default();
    let n = mesh.len();
    for _ in 0..samples {
        let phi_c = CellField::from_vec(mesh, 1, random(n)).expect("sized");
        let phi_p = VertexField::from_vec(mesh, 1, random(n)).expect("sized");
        let a_c = CellField::from_vec(mesh, 3, random(3 * n)).expect("sized");
        let a_p = VertexField::from_vec(mesh, 3, random(3 * n)).expect("sized");
        let r = identity_residuals(mesh, &phi_c, &phi_p, &a_c, &a_p).expect("shapes match");
        report.merge(&r);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mesh(n: usize) -> StaggeredMesh {
        StaggeredMesh::new(n, n, [-1.0, 1.0], [0.0, 3.0]).unwrap()
    }

    fn vertex_scalar(m: &StaggeredMesh, f: impl Fn(f64, f64) -> f64) -> VertexField {
        let data = m.locations().map(|(i, j, _)| {
            let [x, y] = m.vertex(i, j);
            f(x, y)
        });
        VertexField::from_vec(m, 1, data.collect()).unwrap()
    }

    fn vertex_vector(m: &StaggeredMesh, f: impl Fn(f64, f64) -> [f64; 3]) -> VertexField {
        let data = m.locations().flat_map(|(i, j, _)| {
            let [x, y] = m.vertex(i, j);
            f(x, y)
        });
        VertexField::from_vec(m, 3, data.collect()).unwrap()
    }

    /// Cells whose four corners do not wrap around the periodic boundary.
    fn interior(m: &StaggeredMesh) -> impl Iterator<Item = usize> + '_ {
        m.locations()
            .filter(|&(i, j, _)| i + 1 < m.nx && j + 1 < m.ny)
            .map(|(_, _, c)| c)
    }

    #[test]
    fn corner_normals_sum_to_zero() {
        let m = StaggeredMesh::new(3, 5, [0.0, 0.7], [0.0, 2.0]).unwrap();
        let n = m.corner_normals();
        for k in 0..3 {
            assert_eq!(n.iter().map(|v| v[k]).sum::<f64>(), 0.0);
        }
        // The dual sum uses the same four normals with flipped sign.
        assert_eq!(m.cell_volume(), m.dual_volume());
    }

    #[test]
    fn every_location_has_four_neighbours() {
        let m = StaggeredMesh::new(4, 3, [0.0, 1.0], [0.0, 1.0]).unwrap();
        let mut count = vec![0usize; m.len()];
        for (i, j, _) in m.locations() {
            for v in m.cell_corners(i, j) {
                count[v] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 4));
        for (i, j, _) in m.locations() {
            let cells = m.vertex_cells(i, j);
            for c in cells {
                let (ci, cj) = (c % m.nx, c / m.nx);
                assert!(m.cell_corners(ci, cj).contains(&m.index(i, j)));
            }
        }
    }

    #[test]
    fn gradient_of_constant_is_zero() {
        let m = mesh(6);
        let g = grad_cp(&m, &vertex_scalar(&m, |_, _| 3.7)).unwrap();
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn gradient_of_linear_fields() {
        let m = mesh(8);
        let g = grad_cp(&m, &vertex_scalar(&m, |x, _| x)).unwrap();
        for c in interior(&m) {
            let v = g.at(c);
            assert!((v[0] - 1.0).abs() < 1e-13 && v[1].abs() < 1e-13 && v[2] == 0.0);
        }
        let g = grad_cp(&m, &vertex_scalar(&m, |x, y| x + 2.0 * y)).unwrap();
        for c in interior(&m) {
            let v = g.at(c);
            assert!((v[0] - 1.0).abs() < 1e-13 && (v[1] - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn divergence_examples() {
        let m = mesh(8);
        assert_eq!(
            div_cp(&m, &vertex_vector(&m, |_, _| [1.0, -2.0, 0.5]))
                .unwrap()
                .max_abs(),
            0.0
        );
        let d = div_cp(&m, &vertex_vector(&m, |x, y| [x, -y, 0.0])).unwrap();
        for c in interior(&m) {
            assert!(d.at(c)[0].abs() < 1e-13);
        }
        let d = div_cp(&m, &vertex_vector(&m, |x, y| [x, y, 5.0])).unwrap();
        for c in interior(&m) {
            assert!((d.at(c)[0] - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn curl_examples() {
        let m = mesh(8);
        assert_eq!(
            curl_cp(&m, &vertex_vector(&m, |_, _| [1.0, 2.0, 3.0]))
                .unwrap()
                .max_abs(),
            0.0
        );
        let c = curl_cp(&m, &vertex_vector(&m, |x, y| [-y, x, 0.0])).unwrap();
        for k in interior(&m) {
            let v = c.at(k);
            assert!(v[0].abs() < 1e-13 && v[1].abs() < 1e-13 && (v[2] - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn curl_grad_bit_exact_on_dyadic_data() {
        // Small integers on a power-of-two spacing keep every operation exact.
        let m = StaggeredMesh::new(16, 16, [0.0, 4.0], [0.0, 4.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let phi: Vec<f64> = (0..m.len()).map(|_| rng.random_range(-1000..=1000) as f64).collect();
            let phi = CellField::from_vec(&m, 1, phi).unwrap();
            let r = curl_cp(&m, &grad_pc(&m, &phi).unwrap()).unwrap();
            assert_eq!(r.max_abs(), 0.0);
        }
    }

    #[test]
    fn identity_suite_small_residuals() {
        let m = mesh(16);
        let r = identity_suite(&m, 5, 1.0, 11);
        let h = m.dx.min(m.dy);
        assert!(r.max() <= 1e-13 / h, "{r:?}");
    }

    #[test]
    fn identity_suite_degenerate_cases() {
        let m = StaggeredMesh::unit(1, 1).unwrap();
        assert_eq!(identity_suite(&m, 3, 1.0, 1).max(), 0.0);
        let m = mesh(4);
        let z = identity_residuals(
            &m,
            &CellField::zeros(&m, 1),
            &VertexField::zeros(&m, 1),
            &CellField::zeros(&m, 3),
            &VertexField::zeros(&m, 3),
        )
        .unwrap();
        assert_eq!(z.max(), 0.0);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let m = mesh(4);
        let other = mesh(5);
        assert!(matches!(
            grad_cp(&m, &VertexField::zeros(&other, 1)),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            div_cp(&m, &VertexField::zeros(&m, 1)),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(VertexField::from_vec(&m, 3, vec![0.0; 5]).is_err());
    }

    #[test]
    fn rejects_degenerate_mesh() {
        assert!(StaggeredMesh::new(0, 4, [0.0, 1.0], [0.0, 1.0]).is_err());
        assert!(StaggeredMesh::new(4, 4, [1.0, 1.0], [0.0, 1.0]).is_err());
    }
}
