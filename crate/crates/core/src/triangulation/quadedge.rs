//! Guibas-Stolfi divide-and-conquer Delaunay triangulation on a quad-edge
//! structure.
//!
//! Edge `e` belongs to quad `e >> 2`; rotations cycle the low two bits.
//! Primal edges are the even members of each quad.

use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{in_circle, orient, Point};

pub(crate) type EdgeRef = usize;

pub(crate) struct QuadEdges<'a> {
    pts: &'a [Point],
    next: Vec<EdgeRef>,
    org: Vec<u32>,
    alive: Vec<bool>,
}

#[inline]
fn rot(e: EdgeRef) -> EdgeRef {
    (e & !3) | ((e + 1) & 3)
}

#[inline]
pub(crate) fn sym(e: EdgeRef) -> EdgeRef {
    e ^ 2
}

#[inline]
fn inv_rot(e: EdgeRef) -> EdgeRef {
    (e & !3) | ((e + 3) & 3)
}

impl<'a> QuadEdges<'a> {
    pub(crate) fn new(pts: &'a [Point]) -> Self {
        let cap = 4 * (3 * pts.len() + 3);
        QuadEdges {
            pts,
            next: Vec::with_capacity(cap),
            org: Vec::with_capacity(cap),
            alive: Vec::with_capacity(cap / 4),
        }
    }

    #[inline]
    fn onext(&self, e: EdgeRef) -> EdgeRef {
        self.next[e]
    }

    #[inline]
    fn oprev(&self, e: EdgeRef) -> EdgeRef {
        rot(self.next[rot(e)])
    }

    #[inline]
    pub(crate) fn lnext(&self, e: EdgeRef) -> EdgeRef {
        rot(self.next[inv_rot(e)])
    }

    #[inline]
    fn rprev(&self, e: EdgeRef) -> EdgeRef {
        self.next[sym(e)]
    }

    #[inline]
    pub(crate) fn org(&self, e: EdgeRef) -> u32 {
        self.org[e]
    }

    #[inline]
    pub(crate) fn dest(&self, e: EdgeRef) -> u32 {
        self.org[sym(e)]
    }

    #[inline]
    fn p(&self, v: u32) -> Point {
        self.pts[v as usize]
    }

    fn make_edge(&mut self, a: u32, b: u32) -> EdgeRef {
        let q = self.next.len();
        self.next.extend_from_slice(&[q, q + 3, q + 2, q + 1]);
        self.org.extend_from_slice(&[a, u32::MAX, b, u32::MAX]);
        self.alive.push(true);
        q
    }

    fn splice(&mut self, a: EdgeRef, b: EdgeRef) {
        let alpha = rot(self.next[a]);
        let beta = rot(self.next[b]);
        self.next.swap(a, b);
        self.next.swap(alpha, beta);
    }

    fn connect(&mut self, a: EdgeRef, b: EdgeRef) -> EdgeRef {
        let e = self.make_edge(self.dest(a), self.org(b));
        let la = self.lnext(a);
        self.splice(e, la);
        self.splice(sym(e), b);
        e
    }

    fn delete(&mut self, e: EdgeRef) {
        let op = self.oprev(e);
        self.splice(e, op);
        let ops = self.oprev(sym(e));
        self.splice(sym(e), ops);
        self.alive[e >> 2] = false;
    }

    #[inline]
    fn ccw(&self, a: u32, b: u32, c: u32) -> bool {
        if a == b || b == c || c == a {
            return false;
        }
        orient(self.p(a), self.p(b), self.p(c)) > 0.0
    }

    #[inline]
    fn right_of(&self, v: u32, e: EdgeRef) -> bool {
        self.ccw(v, self.dest(e), self.org(e))
    }

    #[inline]
    fn left_of(&self, v: u32, e: EdgeRef) -> bool {
        self.ccw(v, self.org(e), self.dest(e))
    }

    #[inline]
    fn incircle(&self, a: u32, b: u32, c: u32, d: u32) -> bool {
        if d == a || d == b || d == c {
            return false;
        }
        in_circle(self.p(a), self.p(b), self.p(c), self.p(d)) > 0.0
    }

    /// Triangulates the vertex range `lo..hi` of the lexicographically sorted
    /// point slice. Returns the counter-clockwise convex hull edge leaving the
    /// leftmost vertex and the clockwise hull edge leaving the rightmost one.
    pub(crate) fn build(&mut self, lo: u32, hi: u32) -> (EdgeRef, EdgeRef) {
        let n = hi - lo;
        if n == 2 {
            let a = self.make_edge(lo, lo + 1);
            return (a, sym(a));
        }
        if n == 3 {
            let (s1, s2, s3) = (lo, lo + 1, lo + 2);
            let a = self.make_edge(s1, s2);
            let b = self.make_edge(s2, s3);
            self.splice(sym(a), b);
            if self.ccw(s1, s2, s3) {
                self.connect(b, a);
                return (a, sym(b));
            } else if self.ccw(s1, s3, s2) {
                let c = self.connect(b, a);
                return (sym(c), c);
            }
            return (a, sym(b));
        }
        let mid = lo + n / 2;
        let (mut ldo, mut ldi) = self.build(lo, mid);
        let (mut rdi, mut rdo) = self.build(mid, hi);

        loop {
            if self.left_of(self.org(rdi), ldi) {
                ldi = self.lnext(ldi);
            } else if self.right_of(self.org(ldi), rdi) {
                rdi = self.rprev(rdi);
            } else {
                break;
            }
        }

        let mut basel = self.connect(sym(rdi), ldi);
        if self.org(ldi) == self.org(ldo) {
            ldo = sym(basel);
        }
        if self.org(rdi) == self.org(rdo) {
            rdo = basel;
        }

        loop {
            let mut lcand = self.onext(sym(basel));
            if self.valid(lcand, basel) {
                while self.incircle(
                    self.dest(basel),
                    self.org(basel),
                    self.dest(lcand),
                    self.dest(self.onext(lcand)),
                ) {
                    let t = self.onext(lcand);
                    self.delete(lcand);
                    lcand = t;
                }
            }
            let mut rcand = self.oprev(basel);
            if self.valid(rcand, basel) {
                while self.incircle(
                    self.dest(basel),
                    self.org(basel),
                    self.dest(rcand),
                    self.dest(self.oprev(rcand)),
                ) {
                    let t = self.oprev(rcand);
                    self.delete(rcand);
                    rcand = t;
                }
            }
            let lvalid = self.valid(lcand, basel);
            let rvalid = self.valid(rcand, basel);
            if !lvalid && !rvalid {
                break;
            }
            if !lvalid
                || (rvalid
                    && self.incircle(
                        self.dest(lcand),
                        self.org(lcand),
                        self.org(rcand),
                        self.dest(rcand),
                    ))
            {
                basel = self.connect(rcand, sym(basel));
            } else {
                basel = self.connect(sym(basel), sym(lcand));
            }
        }
        (ldo, rdo)
    }

    #[inline]
    fn valid(&self, e: EdgeRef, basel: EdgeRef) -> bool {
        self.right_of(self.dest(e), basel)
    }

    /// Counter-clockwise triangles of the finished subdivision with their
    /// boundary edges, and the triangle on the left of every live primal edge.
    pub(crate) fn triangles(&self) -> (Vec<([u32; 3], [EdgeRef; 3])>, Vec<u32>) {
        let mut face_of = vec![u32::MAX; self.next.len()];
        let mut tris = Vec::new();
        for q in 0..self.alive.len() {
            if !self.alive[q] {
                continue;
            }
            for e in [4 * q, 4 * q + 2] {
                if face_of[e] != u32::MAX {
                    continue;
                }
                let e1 = self.lnext(e);
                let e2 = self.lnext(e1);
                if self.lnext(e2) != e {
                    continue;
                }
                let (a, b, c) = (self.org(e), self.org(e1), self.org(e2));
                if !self.ccw(a, b, c) {
                    continue;
                }
                let id = tris.len() as u32;
                face_of[e] = id;
                face_of[e1] = id;
                face_of[e2] = id;
                tris.push(([a, b, c], [e, e1, e2]));
            }
        }
        (tris, face_of)
    }
}
