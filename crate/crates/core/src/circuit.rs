//! Brick-wall parameterized circuit ansatz.
//!
//! Circuits are columns ("layers") of gate blocks. A class-I block is a
//! single-qubit ZYZ rotation (3 angles, depth 1); a class-II block is an
//! Ising σz⊗σz coupling on a nearest-neighbor pair, sandwiched between
//! single-qubit rotations on both qubits (13 angles, depth 3). Layers
//! alternate the brick offset: even layers start pairs at qubit 0, odd
//! layers at qubit 1.
//!
//! Layouts are static structure; parameters live in a flat angle vector
//! that blocks index into, so one layout can be re-evaluated for many
//! parameter draws without rebuilding anything.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockKind {
    /// One parameterized single-qubit rotation, circuit depth 1.
    #[serde(rename = "class_i")]
    ClassI,
    /// Ising ZZ coupling encapsulated by single-qubit rotations on the
    /// nearest-neighbor pair (qubit_slot, qubit_slot+1), circuit depth 3.
    #[serde(rename = "class_ii")]
    ClassII,
}

impl BlockKind {
    pub fn param_len(self) -> usize {
        match self {
            BlockKind::ClassI => 3,
            BlockKind::ClassII => 13,
        }
    }

    pub fn width(self) -> usize {
        match self {
            BlockKind::ClassI => 1,
            BlockKind::ClassII => 2,
        }
    }

    pub fn depth(self) -> usize {
        match self {
            BlockKind::ClassI => 1,
            BlockKind::ClassII => 3,
        }
    }
}

/// One gate block: its kind, the top qubit it acts on, and where its angles
/// sit in the flat parameter vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateBlock {
    pub kind: BlockKind,
    pub qubit_slot: usize,
    param_offset: usize,
}

impl GateBlock {
    pub fn param_offset(&self) -> usize {
        self.param_offset
    }

    pub fn param_len(&self) -> usize {
        self.kind.param_len()
    }
}

/// Ordered layers of gate blocks plus the parameter count they consume.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LayoutSpec", into = "LayoutSpec")]
pub struct CircuitLayout {
    n_qubits: usize,
    layers: Vec<Vec<GateBlock>>,
    n_params: usize,
}

/// Wire format: `{n_qubits, layers: [[{kind, qubit_slot}, ...], ...]}`.
/// Parameter offsets are recomputed on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct LayoutSpec {
    n_qubits: usize,
    layers: Vec<Vec<BlockSpec>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BlockSpec {
    kind: BlockKind,
    qubit_slot: usize,
}

impl TryFrom<LayoutSpec> for CircuitLayout {
    type Error = Error;
    fn try_from(spec: LayoutSpec) -> Result<Self> {
        CircuitLayout::new(
            spec.n_qubits,
            spec.layers
                .into_iter()
                .map(|l| l.into_iter().map(|b| (b.kind, b.qubit_slot)).collect())
                .collect(),
        )
    }
}

impl From<CircuitLayout> for LayoutSpec {
    fn from(layout: CircuitLayout) -> Self {
        LayoutSpec {
            n_qubits: layout.n_qubits,
            layers: layout
                .layers
                .iter()
                .map(|l| {
                    l.iter()
                        .map(|b| BlockSpec {
                            kind: b.kind,
                            qubit_slot: b.qubit_slot,
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// Brick-wall slot: the layer column and the top qubit of a block position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BrickSlot {
    pub layer: usize,
    pub qubit: usize,
}

/// How a brick-wall slot is filled when building a layout from a slot grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotKind {
    Empty,
    /// Single-qubit rotations on every qubit of the slot.
    ClassI,
    ClassII,
}

impl CircuitLayout {
    /// Build from explicit layers of `(kind, qubit_slot)` blocks. Blocks in
    /// one layer must touch disjoint qubits; class-II blocks must fit a
    /// nearest-neighbor pair. Blocks are ordered by qubit within each layer
    /// and parameter offsets are assigned in that order.
    pub fn new(n_qubits: usize, layers: Vec<Vec<(BlockKind, usize)>>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidConfig("layout needs at least one qubit".into()));
        }
        let mut offset = 0usize;
        let mut built = Vec::with_capacity(layers.len());
        for (li, layer) in layers.into_iter().enumerate() {
            let mut blocks: Vec<(BlockKind, usize)> = layer;
            blocks.sort_by_key(|&(_, q)| q);
            let mut occupied = vec![false; n_qubits];
            let mut out = Vec::with_capacity(blocks.len());
            for (kind, slot) in blocks {
                let top = slot + kind.width() - 1;
                if top >= n_qubits {
                    return Err(Error::InvalidConfig(format!(
                        "layer {li}: {kind:?} block at qubit {slot} exceeds {n_qubits} qubits"
                    )));
                }
                for q in slot..=top {
                    if occupied[q] {
                        return Err(Error::InvalidConfig(format!(
                            "layer {li}: blocks overlap on qubit {q}"
                        )));
                    }
                    occupied[q] = true;
                }
                out.push(GateBlock {
                    kind,
                    qubit_slot: slot,
                    param_offset: offset,
                });
                offset += kind.param_len();
            }
            built.push(out);
        }
        Ok(Self {
            n_qubits,
            layers: built,
            n_params: offset,
        })
    }

    /// Zero layers; the circuit unitary is the identity.
    pub fn empty(n_qubits: usize) -> Self {
        Self::new(n_qubits, Vec::new()).expect("empty layout is always valid")
    }

    /// One layer of class-I rotations on every qubit.
    pub fn local_layer(n_qubits: usize) -> Self {
        let layer = (0..n_qubits).map(|q| (BlockKind::ClassI, q)).collect();
        Self::new(n_qubits, vec![layer]).expect("local layer is always valid")
    }

    /// A single class-II block on the pair (0, 1).
    pub fn single_class_two(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, vec![vec![(BlockKind::ClassII, 0)]])
    }

    /// The slot grid of an `n_layers` brick wall: even layers offset 0, odd
    /// layers offset 1. A layer whose offset leaves no room (two qubits,
    /// odd layers) falls back to offset 0 so every layer holds at least one
    /// slot; one qubit yields single-qubit slots.
    pub fn brick_slots(n_qubits: usize, n_layers: usize) -> Vec<BrickSlot> {
        let mut slots = Vec::new();
        for layer in 0..n_layers {
            if n_qubits == 1 {
                slots.push(BrickSlot { layer, qubit: 0 });
                continue;
            }
            let offset = if n_qubits > 2 { layer % 2 } else { 0 };
            let mut q = offset;
            let mut any = false;
            while q + 1 < n_qubits {
                slots.push(BrickSlot { layer, qubit: q });
                any = true;
                q += 2;
            }
            if !any {
                slots.push(BrickSlot { layer, qubit: 0 });
            }
        }
        slots
    }

    /// Brick wall with every slot a class-II block (single-qubit slots
    /// become class-I).
    pub fn brick_wall(n_qubits: usize, n_layers: usize) -> Result<Self> {
        let slots = Self::brick_slots(n_qubits, n_layers);
        let kinds = vec![SlotKind::ClassII; slots.len()];
        Self::from_slot_kinds(n_qubits, n_layers, &kinds)
    }

    /// Brick wall with per-slot kinds, aligned with
    /// [`brick_slots`](Self::brick_slots) order. A `ClassI` slot places
    /// single-qubit rotations on each qubit of the pair.
    pub fn from_slot_kinds(n_qubits: usize, n_layers: usize, kinds: &[SlotKind]) -> Result<Self> {
        let slots = Self::brick_slots(n_qubits, n_layers);
        if slots.len() != kinds.len() {
            return Err(Error::InvalidConfig(format!(
                "slot grid has {} positions, got {} kinds",
                slots.len(),
                kinds.len()
            )));
        }
        let mut layers: Vec<Vec<(BlockKind, usize)>> = vec![Vec::new(); n_layers];
        for (slot, &kind) in slots.iter().zip(kinds) {
            let wide = n_qubits > 1;
            match kind {
                SlotKind::Empty => {}
                SlotKind::ClassI => {
                    layers[slot.layer].push((BlockKind::ClassI, slot.qubit));
                    if wide {
                        layers[slot.layer].push((BlockKind::ClassI, slot.qubit + 1));
                    }
                }
                SlotKind::ClassII => {
                    if !wide {
                        layers[slot.layer].push((BlockKind::ClassI, slot.qubit));
                    } else {
                        layers[slot.layer].push((BlockKind::ClassII, slot.qubit));
                    }
                }
            }
        }
        Self::new(n_qubits, layers)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn layers(&self) -> &[Vec<GateBlock>] {
        &self.layers
    }

    pub fn blocks(&self) -> impl Iterator<Item = &GateBlock> {
        self.layers.iter().flatten()
    }

    /// Qubit-reversed layout (the mirror through the middle wire).
    pub fn mirrored(&self) -> Self {
        let n = self.n_qubits;
        let layers = self
            .layers
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|b| (b.kind, n - b.qubit_slot - b.kind.width()))
                    .collect()
            })
            .collect();
        Self::new(n, layers).expect("mirror of a valid layout is valid")
    }
}

/// ZYZ single-qubit rotation Rz(alpha)·Ry(beta)·Rz(gamma); covers SU(2).
pub fn su2<T: Scalar>(alpha: T, beta: T, gamma: T) -> ComplexMatrix<T> {
    let half = T::lit(0.5);
    let (cb, sb) = ((beta * half).cos(), (beta * half).sin());
    let phase = |t: T| Complex::new(t.cos(), t.sin());
    // global phases of the two Rz factors combine on the diagonal entries
    let a = alpha * half;
    let g = gamma * half;
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 0)] = phase(-(a + g)).scale(cb);
    m[(0, 1)] = -phase(-(a - g)).scale(sb);
    m[(1, 0)] = phase(a - g).scale(sb);
    m[(1, 1)] = phase(a + g).scale(cb);
    m
}

/// Ising coupling exp(-i θ/2 σz⊗σz) = diag(e^{-iθ/2}, e^{iθ/2}, e^{iθ/2}, e^{-iθ/2}).
pub fn ising_zz<T: Scalar>(theta: T) -> ComplexMatrix<T> {
    let half = theta * T::lit(0.5);
    let minus = Complex::new(half.cos(), -half.sin());
    let plus = Complex::new(half.cos(), half.sin());
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = minus;
    m[(1, 1)] = plus;
    m[(2, 2)] = plus;
    m[(3, 3)] = minus;
    m
}

/// Unitary of one block, sized 2^width, reading its angles from `params`.
pub fn block_unitary<T: Scalar>(block: &GateBlock, params: &[T]) -> Result<ComplexMatrix<T>> {
    let lo = block.param_offset;
    let hi = lo + block.param_len();
    if hi > params.len() {
        return Err(Error::IndexOutOfRange(format!(
            "block needs params [{lo}..{hi}), vector has {}",
            params.len()
        )));
    }
    let p = &params[lo..hi];
    Ok(match block.kind {
        BlockKind::ClassI => su2(p[0], p[1], p[2]),
        BlockKind::ClassII => {
            let pre = su2(p[0], p[1], p[2]).kron(&su2(p[3], p[4], p[5]));
            let post = su2(p[7], p[8], p[9]).kron(&su2(p[10], p[11], p[12]));
            post.matmul(&ising_zz(p[6])).matmul(&pre)
        }
    })
}

/// Full-circuit unitary. Layer 0 is applied to the state first, so it sits
/// rightmost in the operator product.
pub fn circuit_unitary<T: Scalar>(layout: &CircuitLayout, params: &[T]) -> Result<ComplexMatrix<T>> {
    if params.len() != layout.n_params {
        return Err(Error::DimensionMismatch(format!(
            "layout consumes {} parameters, got {}",
            layout.n_params,
            params.len()
        )));
    }
    let dim = 1usize << layout.n_qubits;
    let mut total = ComplexMatrix::identity(dim);
    for layer in &layout.layers {
        if layer.is_empty() {
            continue;
        }
        let mut unit = ComplexMatrix::new(1, 1, vec![Complex::new(T::one(), T::zero())])
            .expect("1x1 identity");
        let mut q = 0usize;
        let mut bi = 0usize;
        while q < layout.n_qubits {
            if bi < layer.len() && layer[bi].qubit_slot == q {
                let b = &layer[bi];
                unit = unit.kron(&block_unitary(b, params)?);
                q += b.kind.width();
                bi += 1;
            } else {
                unit = unit.kron(&ComplexMatrix::identity(2));
                q += 1;
            }
        }
        total = unit.matmul(&total);
    }
    Ok(total)
}

/// Maximum over qubits of the summed depth contributions of the blocks
/// touching that qubit (class-I counts 1, class-II counts 3).
pub fn circuit_depth(layout: &CircuitLayout) -> usize {
    let mut per_qubit = vec![0usize; layout.n_qubits];
    for b in layout.blocks() {
        for q in b.qubit_slot..b.qubit_slot + b.kind.width() {
            per_qubit[q] += b.kind.depth();
        }
    }
    per_qubit.into_iter().max().unwrap_or(0)
}

/// Number of class-II blocks, each holding exactly one two-qubit gate.
pub fn two_qubit_gate_count(layout: &CircuitLayout) -> usize {
    layout.blocks().filter(|b| b.kind == BlockKind::ClassII).count()
}

/// Uniform random angles in [0, 2π), one per layout parameter.
pub fn random_params<T: Scalar, R: rand::Rng>(layout: &CircuitLayout, rng: &mut R) -> Vec<T> {
    (0..layout.n_params)
        .map(|_| T::lit(rng.random::<f64>() * std::f64::consts::TAU))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn su2_basics() {
        let id = su2(0.0f64, 0.0, 0.0);
        assert!((&id - &ComplexMatrix::identity(2)).frobenius_norm() < 1e-15);

        let ry_pi = su2(0.0f64, std::f64::consts::PI, 0.0);
        assert_abs_diff_eq!(ry_pi[(0, 0)].norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ry_pi[(0, 1)].re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ry_pi[(1, 0)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ry_pi[(1, 1)].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn su2_is_special_unitary() {
        let mut rng = StdRng::seed_from_u64(20);
        for _ in 0..20 {
            let angle = |rng: &mut StdRng| rand::Rng::random::<f64>(rng) * std::f64::consts::TAU;
            let u = su2(angle(&mut rng), angle(&mut rng), angle(&mut rng));
            assert!(u.unitarity_residual() < 1e-12);
            let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
            assert_abs_diff_eq!(det.re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(det.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ising_zz_values() {
        let id = ising_zz(0.0f64);
        assert!((&id - &ComplexMatrix::identity(4)).frobenius_norm() < 1e-15);

        let pi = ising_zz(std::f64::consts::PI);
        for (i, want_im) in [-1.0, 1.0, 1.0, -1.0].iter().enumerate() {
            assert_abs_diff_eq!(pi[(i, i)].re, 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(pi[(i, i)].im, want_im, epsilon = 1e-15);
        }

        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..10 {
            let t = rand::Rng::random::<f64>(&mut rng) * std::f64::consts::TAU;
            let prod = ising_zz(t).matmul(&ising_zz(-t));
            assert!((&prod - &ComplexMatrix::identity(4)).frobenius_norm() < 1e-14);
        }
    }

    #[test]
    fn block_unitary_identity_at_zero() {
        let layout = CircuitLayout::single_class_two(2).unwrap();
        let block = layout.blocks().next().unwrap();
        let u = block_unitary(block, &vec![0.0f64; 13]).unwrap();
        assert!((&u - &ComplexMatrix::identity(4)).frobenius_norm() < 1e-14);

        let local = CircuitLayout::local_layer(1);
        let b = local.blocks().next().unwrap();
        let u = block_unitary(b, &[0.0f64; 3]).unwrap();
        assert!((&u - &ComplexMatrix::identity(2)).frobenius_norm() < 1e-15);
    }

    #[test]
    fn class_two_with_zero_coupling_is_local() {
        let mut rng = StdRng::seed_from_u64(22);
        let layout = CircuitLayout::single_class_two(2).unwrap();
        let block = layout.blocks().next().unwrap();
        let mut p: Vec<f64> = random_params(&layout, &mut rng);
        p[6] = 0.0;
        let u = block_unitary(block, &p).unwrap();
        let left = su2(p[7], p[8], p[9]).matmul(&su2(p[0], p[1], p[2]));
        let right = su2(p[10], p[11], p[12]).matmul(&su2(p[3], p[4], p[5]));
        let expect = left.kron(&right);
        assert!((&u - &expect).frobenius_norm() < 1e-12);
    }

    #[test]
    fn block_param_slice_bounds_checked() {
        let layout = CircuitLayout::single_class_two(2).unwrap();
        let block = layout.blocks().next().unwrap();
        assert!(matches!(
            block_unitary(block, &[0.0f64; 5]),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn circuit_unitary_cases() {
        let empty = CircuitLayout::empty(3);
        let u = circuit_unitary::<f64>(&empty, &[]).unwrap();
        assert!((&u - &ComplexMatrix::identity(8)).frobenius_norm() < 1e-15);

        let local = CircuitLayout::local_layer(2);
        let u = circuit_unitary(&local, &vec![0.0f64; 6]).unwrap();
        assert!((&u - &ComplexMatrix::identity(4)).frobenius_norm() < 1e-15);

        let mut rng = StdRng::seed_from_u64(23);
        for n in [2usize, 3, 4] {
            for layers in [1usize, 3] {
                let layout = CircuitLayout::brick_wall(n, layers).unwrap();
                let p: Vec<f64> = random_params(&layout, &mut rng);
                let g = circuit_unitary(&layout, &p).unwrap();
                assert!(
                    g.unitarity_residual() < 1e-10,
                    "non-unitary circuit at n={n} layers={layers}"
                );
            }
        }
    }

    #[test]
    fn layer_order_is_applied_first_to_last() {
        // two layers on one qubit: G = U1 · U0
        let layout = CircuitLayout::new(1, vec![vec![(BlockKind::ClassI, 0)], vec![(BlockKind::ClassI, 0)]]).unwrap();
        let p = [0.3f64, 0.7, -0.2, 1.1, 0.4, 0.9];
        let g = circuit_unitary(&layout, &p).unwrap();
        let expect = su2(p[3], p[4], p[5]).matmul(&su2(p[0], p[1], p[2]));
        assert!((&g - &expect).frobenius_norm() < 1e-13);
    }

    #[test]
    fn depth_accounting() {
        let one_class2 = CircuitLayout::single_class_two(2).unwrap();
        assert_eq!(circuit_depth(&one_class2), 3);

        let one_class1 = CircuitLayout::new(2, vec![vec![(BlockKind::ClassI, 0)]]).unwrap();
        assert_eq!(circuit_depth(&one_class1), 1);

        let stacked = CircuitLayout::new(
            2,
            vec![vec![(BlockKind::ClassII, 0)], vec![(BlockKind::ClassII, 0)]],
        )
        .unwrap();
        assert_eq!(circuit_depth(&stacked), 6);
        assert_eq!(two_qubit_gate_count(&stacked), 2);
    }

    #[test]
    fn two_qubit_gate_counting() {
        let local = CircuitLayout::local_layer(4);
        assert_eq!(two_qubit_gate_count(&local), 0);

        // N=4, 2 full class-II layers: 2 + 1 slots
        let wall = CircuitLayout::brick_wall(4, 2).unwrap();
        assert_eq!(two_qubit_gate_count(&wall), 3);
        let per_layer: Vec<usize> = wall.layers().iter().map(|l| l.len()).collect();
        assert_eq!(per_layer, vec![2, 1]);
    }

    #[test]
    fn depth_is_mirror_symmetric() {
        let mut rng = StdRng::seed_from_u64(24);
        for n in [2usize, 3, 5] {
            for layers in [1usize, 2, 4] {
                let slots = CircuitLayout::brick_slots(n, layers);
                let kinds: Vec<SlotKind> = (0..slots.len())
                    .map(|_| match rand::Rng::random_range(&mut rng, 0..3) {
                        0 => SlotKind::Empty,
                        1 => SlotKind::ClassI,
                        _ => SlotKind::ClassII,
                    })
                    .collect();
                let layout = CircuitLayout::from_slot_kinds(n, layers, &kinds).unwrap();
                assert_eq!(circuit_depth(&layout), circuit_depth(&layout.mirrored()));
            }
        }
    }

    #[test]
    fn layout_validation() {
        // overlapping blocks in one layer
        assert!(CircuitLayout::new(2, vec![vec![(BlockKind::ClassII, 0), (BlockKind::ClassI, 1)]]).is_err());
        // class-II needs a neighbor below
        assert!(CircuitLayout::new(2, vec![vec![(BlockKind::ClassII, 1)]]).is_err());
        // out of range
        assert!(CircuitLayout::new(2, vec![vec![(BlockKind::ClassI, 2)]]).is_err());
    }

    #[test]
    fn parameter_length_is_checked() {
        let layout = CircuitLayout::brick_wall(3, 2).unwrap();
        let bad = vec![0.0f64; layout.n_params() + 1];
        assert!(matches!(
            circuit_unitary(&layout, &bad),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let layout = CircuitLayout::new(
            3,
            vec![
                vec![(BlockKind::ClassII, 0), (BlockKind::ClassI, 2)],
                vec![(BlockKind::ClassII, 1)],
            ],
        )
        .unwrap();
        let json = serde_json::to_string(&layout).unwrap();
        let back: CircuitLayout = serde_json::from_str(&json).unwrap();
        assert_eq!(layout, back);
        // serialized form carries kind + qubit_slot
        assert!(json.contains("\"kind\":\"class_ii\""));
        assert!(json.contains("\"qubit_slot\":2"));

        // parameters round-trip bit-exactly through JSON
        let params = vec![0.1f64, std::f64::consts::PI, 1.0 / 3.0, 2.0f64.sqrt()];
        let pj = serde_json::to_string(&params).unwrap();
        let pback: Vec<f64> = serde_json::from_str(&pj).unwrap();
        assert_eq!(params, pback);
    }
}
