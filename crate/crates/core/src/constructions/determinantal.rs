use super::gradient::build_gradient_abp;
use super::output_name;
use crate::abp::{AbpGraph, AffineLabel, Flavor};
use crate::error::{Error, Result};
use crate::oracle::{det_leibniz, ORACLE_MAX_N};
use crate::polynomial::{PolyMatrix, Polynomial};
use crate::ring::{RingDescriptor, Value};

type Dense = Vec<Vec<Value>>;

/// Invertible `g`, `h` with `g M_0 h = [[0, 0], [0, I_r]]`, the rank `r`,
/// and `det(g) det(h)`.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub g: Dense,
    pub h: Dense,
    pub rank: usize,
    pub unit: Value,
}

fn identity(ring: &RingDescriptor, s: usize) -> Dense {
    (0..s)
        .map(|i| {
            (0..s)
                .map(|j| if i == j { ring.one() } else { ring.zero() })
                .collect()
        })
        .collect()
}

/// Gauss-Jordan on rows and columns of the constant matrix `m0`.
pub fn constant_normal_form(ring: &RingDescriptor, m0: &Dense) -> Result<NormalForm> {
    let s = m0.len();
    let mut a = m0.clone();
    let mut g = identity(ring, s);
    let mut h = identity(ring, s);
    let mut unit = ring.one();
    let mut rank = 0;
    while rank < s {
        let p = rank;
        let Some((pi, pj)) = (p..s)
            .flat_map(|i| (p..s).map(move |j| (i, j)))
            .find(|&(i, j)| !ring.is_zero(&a[i][j]))
        else {
            break;
        };
        if pi != p {
            a.swap(pi, p);
            g.swap(pi, p);
            unit = ring.neg(&unit);
        }
        if pj != p {
            for row in a.iter_mut().chain(h.iter_mut()) {
                row.swap(pj, p);
            }
            unit = ring.neg(&unit);
        }
        let inv = ring.invert(&a[p][p])?;
        for x in a[p].iter_mut().chain(g[p].iter_mut()) {
            *x = ring.mul(x, &inv);
        }
        unit = ring.mul(&unit, &inv);
        for i in 0..s {
            if i != p && !ring.is_zero(&a[i][p]) {
                let f = a[i][p].clone();
                for j in 0..s {
                    a[i][j] = ring.sub(&a[i][j], &ring.mul(&f, &a[p][j]));
                    g[i][j] = ring.sub(&g[i][j], &ring.mul(&f, &g[p][j]));
                }
            }
        }
        for j in 0..s {
            if j != p && !ring.is_zero(&a[p][j]) {
                let f = a[p][j].clone();
                for row in a.iter_mut().chain(h.iter_mut()) {
                    row[j] = ring.sub(&row[j], &ring.mul(&f, &row[p]));
                }
            }
        }
        rank += 1;
    }
    // reversing rows of g and columns of h moves the identity block last
    g.reverse();
    for row in h.iter_mut() {
        row.reverse();
    }
    Ok(NormalForm { g, h, rank, unit })
}

fn to_poly(ring: &RingDescriptor, n: usize, m: &Dense) -> Result<PolyMatrix> {
    let s = m.len();
    PolyMatrix::new(
        s,
        s,
        m.iter()
            .flatten()
            .map(|c| Polynomial::constant(ring, n, c.clone()))
            .collect(),
    )
}

/// The Schur-type matrix `W = A - B (sum_{i<=d-2} D^i) C` with its first row
/// scaled so that the degree-`d` part of `det W` is `det M`, together with
/// the blocks it was built from.
#[derive(Clone, Debug)]
pub struct SchurData {
    pub a: PolyMatrix,
    pub b: Option<PolyMatrix>,
    pub c: Option<PolyMatrix>,
    pub dm: Option<PolyMatrix>,
    pub w: Option<PolyMatrix>,
    pub rank: usize,
}

pub fn schur_data(m: &PolyMatrix, d: usize) -> Result<SchurData> {
    let ring = m.ring().clone();
    let n = m.ambient_n();
    let s = m.rows();
    let mut m0 = vec![vec![ring.zero(); s]; s];
    let mut m1 = PolyMatrix::zeros(&ring, n, s, s);
    for i in 1..=s {
        for j in 1..=s {
            let e = m.get(i, j);
            if e.degree() > 1 {
                return Err(Error::ParameterOutOfRange(format!(
                    "entry ({i},{j}) is not affine"
                )));
            }
            m0[i - 1][j - 1] = e.constant_term().into_value();
            m1.set(i, j, e.homogeneous_component(1));
        }
    }
    let nf = constant_normal_form(&ring, &m0)?;
    let k = s - nf.rank;
    let mut g = nf.g.clone();
    if k > 0 {
        let inv_u = ring.invert(&nf.unit)?;
        for x in g[0].iter_mut() {
            *x = ring.mul(x, &inv_u);
        }
    }
    let t = to_poly(&ring, n, &g)?
        .mul(&m1)?
        .mul(&to_poly(&ring, n, &nf.h)?)?;
    if k == 0 {
        let a = PolyMatrix::zeros(&ring, n, 1, 1);
        return Ok(SchurData {
            a,
            b: None,
            c: None,
            dm: None,
            w: None,
            rank: nf.rank,
        });
    }
    let a = t.block(1, k, 1, k)?;
    if nf.rank == 0 {
        return Ok(SchurData {
            w: Some(a.clone()),
            a,
            b: None,
            c: None,
            dm: None,
            rank: 0,
        });
    }
    let b = t.block(1, k, k + 1, s)?;
    let c = t.block(k + 1, s, 1, k)?;
    let dm = t.block(k + 1, s, k + 1, s)?.scale_value(&ring.from_i64(-1));
    let mut series = PolyMatrix::zeros(&ring, n, nf.rank, nf.rank);
    let mut power = PolyMatrix::identity(&ring, n, nf.rank);
    for _ in 0..d.saturating_sub(1) {
        series = series.add(&power)?;
        power = power.mul(&dm)?;
    }
    let w = a.sub(&b.mul(&series)?.mul(&c)?)?;
    Ok(SchurData {
        a,
        b: Some(b),
        c: Some(c),
        dm: Some(dm),
        w: Some(w),
        rank: nf.rank,
    })
}

/// An affine program for `W_{p,q}`: the edge `A_{p,q}` plus walks
/// `-B_{p,k} D^i C_{l,q}` for `i <= d-2`, wired between `from` and `to` and
/// scaled by `coeff` on the edges leaving `from`.
fn wire_entry(
    out: &mut AbpGraph,
    sd: &SchurData,
    d: usize,
    p: usize,
    q: usize,
    from: usize,
    to: usize,
    coeff: &Value,
    next_rank: &mut usize,
) -> Result<()> {
    let ring = out.ring().clone();
    let label = |e: &Polynomial| -> Result<AffineLabel> { AffineLabel::from_polynomial(e) };
    out.add_edge(from, to, label(sd.a.get(p, q))?.scale(&ring, coeff));
    let (Some(b), Some(c), Some(dm)) = (&sd.b, &sd.c, &sd.dm) else {
        return Ok(());
    };
    if d < 2 {
        return Ok(());
    }
    let r = sd.rank;
    let steps: Vec<Vec<usize>> = (0..d - 1)
        .map(|_| {
            (0..r)
                .map(|_| {
                    *next_rank += 1;
                    out.add_vertex(*next_rank)
                })
                .collect()
        })
        .collect();
    let minus = ring.neg(coeff);
    for k in 1..=r {
        out.add_edge(
            from,
            steps[0][k - 1],
            label(b.get(p, k))?.scale(&ring, &minus),
        );
        for step in &steps {
            out.add_edge(step[k - 1], to, label(c.get(k, q))?);
        }
    }
    for w in steps.windows(2) {
        for k in 1..=r {
            for l in 1..=r {
                out.add_edge(w[0][k - 1], w[1][l - 1], label(dm.get(k, l))?);
            }
        }
    }
    Ok(())
}

/// A layered program computing `det(M)` for an affine matrix whose
/// determinant is homogeneous of degree `d`: reduce the constant part to
/// normal form, form the Schur-type matrix `W` of size `k = s - rank`,
/// substitute an affine program for each `W_{p,q}` into the gradient
/// program for `det_k`, and keep the degree-`d` part.
pub fn width_from_determinantal(
    m: &PolyMatrix,
    d: usize,
    ring: &RingDescriptor,
) -> Result<AbpGraph> {
    if m.ring() != ring {
        return Err(Error::RingMismatch);
    }
    if !ring.is_field() {
        return Err(Error::NotAField);
    }
    if !m.is_square() {
        return Err(Error::DimensionMismatch(
            "determinantal representation must be square".into(),
        ));
    }
    if m.rows() <= ORACLE_MAX_N {
        let f = det_leibniz(m)?;
        if !f.is_homogeneous_of(d) {
            return Err(Error::NotHomogeneous(d));
        }
    }
    let n = m.ambient_n();
    let sd = schur_data(m, d)?;
    let k = m.rows() - sd.rank;
    let name = "f";
    let mut out = AbpGraph::new(Flavor::Aabp, 0, ring, n);
    if k == 0 {
        // det M is the nonzero constant det(M_0), homogeneous only for d = 0
        let c = ring.invert(&constant_normal_form(ring, &m0_of(m))?.unit)?;
        let t = out.add_vertex(1);
        out.add_edge(0, t, AffineLabel::constant(ring, c));
        out.set_output(name, t);
        return out.homogenize(d);
    }
    let (det_k, _) = build_gradient_abp(k, k, ring)?;
    let det_k = det_k.sub_abp(&output_name(k, k))?.to_aabp()?;
    let mut map = vec![0usize; det_k.num_vertices()];
    let mut next_rank = 0;
    for v in 0..det_k.num_vertices() {
        map[v] = if v == det_k.source() {
            0
        } else {
            next_rank += 1;
            out.add_vertex(next_rank)
        };
    }
    for (&(u, v), l) in det_k.edges() {
        if !ring.is_zero(l.constant_part()) {
            out.add_edge(
                map[u],
                map[v],
                AffineLabel::constant(ring, l.constant_part().clone()),
            );
        }
        for (var, c) in l.linear_part() {
            wire_entry(
                &mut out,
                &sd,
                d,
                var.row(),
                var.col(),
                map[u],
                map[v],
                c,
                &mut next_rank,
            )?;
        }
    }
    out.set_output(name, map[det_k.sink()?]);
    // ranks only need to increase along edges
    let order = out
        .topological_order()
        .ok_or_else(|| Error::InvalidGraph(vec!["cycle".into()]))?;
    let mut ranked = AbpGraph::new(Flavor::Aabp, 0, ring, n);
    let mut pos = vec![0usize; out.num_vertices()];
    for (rank, &v) in order.iter().enumerate() {
        pos[v] = if v == out.source() {
            0
        } else {
            ranked.add_vertex(rank)
        };
    }
    for (&(u, v), l) in out.edges() {
        ranked.add_edge(pos[u], pos[v], l.clone());
    }
    ranked.set_output(name, pos[out.output(name)?]);
    ranked.homogenize(d)
}

fn m0_of(m: &PolyMatrix) -> Dense {
    (1..=m.rows())
        .map(|i| {
            (1..=m.cols())
                .map(|j| m.get(i, j).constant_term().into_value())
                .collect()
        })
        .collect()
}
