use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::linalg::{self, CMatrix};
use crate::tensor::ops::embed_matrix;
use crate::tensor::spectral::expm_hamiltonian;
use crate::tensor::{QOp, QState, SystemLayout, DEFAULT_MAX_DIM, LABEL_A, LABEL_B, LABEL_M};

/// Tolerance on `‖Σ K†K − I‖_max`.
pub const COMPLETENESS_TOL: f64 = 1e-8;

/// Anything that maps states on a layout to states on the same layout.
pub trait QuantumMap: Sync {
    fn apply(&self, state: &QState) -> Result<QState>;
}

/// Apply `map` to `state`.
pub fn apply_map(state: &QState, map: &dyn QuantumMap) -> Result<QState> {
    map.apply(state)
}

/// `U ρ U†` with `U = exp(−itH)`; `H` must live on the state's layout.
pub fn evolve(state: &QState, h: &QOp, t: f64) -> Result<QState> {
    if !h.layout().same_as(state.layout()) {
        return Err(Error::LayoutMismatch(format!(
            "Hamiltonian on {:?}, state on {:?}",
            h.layout().labels(),
            state.layout().labels()
        )));
    }
    let u = expm_hamiltonian(h, t)?;
    state.conjugate(u.matrix())
}

/// Kraus operators acting on the subsystems of `layout`, in its order.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMap {
    kraus_ops: Vec<CMatrix>,
    layout: SystemLayout,
}

impl KrausMap {
    pub fn new(kraus_ops: Vec<CMatrix>, layout: SystemLayout) -> Result<Self> {
        if kraus_ops.is_empty() {
            return Err(Error::InvalidArgument("a Kraus map needs at least one operator".into()));
        }
        let d = layout.total_dim();
        let mut sum = CMatrix::zeros(d, d);
        for k in &kraus_ops {
            if k.shape() != (d, d) {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator is {}x{}, layout dimension is {d}",
                    k.nrows(),
                    k.ncols()
                )));
            }
            sum += k.adjoint() * k;
        }
        let dev = linalg::max_abs(&(sum - linalg::identity(d)));
        if !(dev <= COMPLETENESS_TOL) {
            return Err(Error::Completeness(dev));
        }
        Ok(Self { kraus_ops, layout })
    }

    pub fn unitary(u: &QOp) -> Result<Self> {
        Self::new(vec![u.matrix().clone()], u.layout().clone())
    }

    pub fn identity(layout: SystemLayout) -> Self {
        let d = layout.total_dim();
        Self { kraus_ops: vec![linalg::identity(d)], layout }
    }

    pub fn kraus_ops(&self) -> &[CMatrix] {
        &self.kraus_ops
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn acting_on(&self) -> Vec<&str> {
        self.layout.labels()
    }

    /// Kraus operators lifted onto `target` by label.
    pub fn embedded(&self, target: &SystemLayout) -> Result<Vec<CMatrix>> {
        let dims = self.layout.dims();
        let labels = self.layout.labels();
        self.kraus_ops.iter().map(|k| embed_matrix(k, &dims, &labels, target)).collect()
    }

    fn acts_on_exactly(&self, labels: [&str; 2]) -> bool {
        let mut own = self.layout.labels();
        own.sort_unstable();
        let mut want = labels.to_vec();
        want.sort_unstable();
        own == want
    }
}

impl QuantumMap for KrausMap {
    fn apply(&self, state: &QState) -> Result<QState> {
        let d = state.dim();
        let mut out = CMatrix::zeros(d, d);
        for k in self.embedded(state.layout())? {
            out += &k * state.matrix() * k.adjoint();
        }
        QState::with_tol(out, state.layout().clone(), state.tol())
    }
}

/// Unitary conjugation; the operator must live on the state's layout.
impl QuantumMap for QOp {
    fn apply(&self, state: &QState) -> Result<QState> {
        if !self.layout().same_as(state.layout()) {
            return Err(Error::LayoutMismatch("unitary and state live on different layouts".into()));
        }
        state.conjugate(self.matrix())
    }
}

/// Which of the two interactions acts first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    AmThenBm,
    BmThenAm,
}

impl Order {
    pub fn reversed(self) -> Order {
        match self {
            Order::AmThenBm => Order::BmThenAm,
            Order::BmThenAm => Order::AmThenBm,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Order::AmThenBm => "am_then_bm",
            Order::BmThenAm => "bm_then_am",
        }
    }
}

/// A map on `{A, M}` and a map on `{B, M}`, applied in `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecomposableSpec {
    first: KrausMap,
    second: KrausMap,
    order: Order,
}

impl DecomposableSpec {
    /// `first` must act on exactly `{A, M}` and `second` on `{B, M}`.
    pub fn new(first: KrausMap, second: KrausMap, order: Order) -> Result<Self> {
        if !first.acts_on_exactly([LABEL_A, LABEL_M]) {
            return Err(Error::LayoutMismatch(format!("first map acts on {:?}, expected {{A, M}}", first.acting_on())));
        }
        if !second.acts_on_exactly([LABEL_B, LABEL_M]) {
            return Err(Error::LayoutMismatch(format!("second map acts on {:?}, expected {{B, M}}", second.acting_on())));
        }
        if first.layout.dim_of(LABEL_M)? != second.layout.dim_of(LABEL_M)? {
            return Err(Error::DimensionMismatch("the two maps disagree on the mediator dimension".into()));
        }
        Ok(Self { first, second, order })
    }

    pub fn from_unitaries(u_am: &QOp, u_bm: &QOp, order: Order) -> Result<Self> {
        Self::new(KrausMap::unitary(u_am)?, KrausMap::unitary(u_bm)?, order)
    }

    pub fn first(&self) -> &KrausMap {
        &self.first
    }

    pub fn second(&self) -> &KrausMap {
        &self.second
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// `(d_A, d_M, d_B)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        let l1 = &self.first.layout;
        let l2 = &self.second.layout;
        // labels were validated in `new`
        (l1.dim_of(LABEL_A).unwrap_or(0), l1.dim_of(LABEL_M).unwrap_or(0), l2.dim_of(LABEL_B).unwrap_or(0))
    }

    /// Canonical `(A, M, B)` layout the decomposition acts on.
    pub fn layout(&self) -> Result<SystemLayout> {
        let (a, m, b) = self.dims();
        SystemLayout::tripartite(a, m, b)
    }
}

impl QuantumMap for DecomposableSpec {
    fn apply(&self, state: &QState) -> Result<QState> {
        let (x, y) = match self.order {
            Order::AmThenBm => (&self.first, &self.second),
            Order::BmThenAm => (&self.second, &self.first),
        };
        y.apply(&x.apply(state)?)
    }
}

/// A decomposable evolution of `A ⊗ B ⊗ M` started with `M` in `sigma_m`;
/// its marginal on `AB` is a map in the dilated class for `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationSpec {
    mediator_dim: usize,
    sigma_m: QState,
    body: DecomposableSpec,
}

impl DilationSpec {
    pub fn new(sigma_m: QState, body: DecomposableSpec) -> Result<Self> {
        Self::with_cap(sigma_m, body, DEFAULT_MAX_DIM)
    }

    pub fn with_cap(sigma_m: QState, body: DecomposableSpec, cap: usize) -> Result<Self> {
        let labels = sigma_m.layout().labels();
        if labels != [LABEL_M] {
            return Err(Error::LayoutMismatch(format!("sigma_M must live on [M], got {labels:?}")));
        }
        let m = sigma_m.dim();
        if m > cap {
            return Err(Error::DimensionCap { dim: m, cap });
        }
        if body.dims().1 != m {
            return Err(Error::DimensionMismatch(format!(
                "sigma_M has dimension {m}, body mediator has {}",
                body.dims().1
            )));
        }
        Ok(Self { mediator_dim: m, sigma_m, body })
    }

    pub fn mediator_dim(&self) -> usize {
        self.mediator_dim
    }

    pub fn sigma_m(&self) -> &QState {
        &self.sigma_m
    }

    pub fn body(&self) -> &DecomposableSpec {
        &self.body
    }
}

impl QuantumMap for DilationSpec {
    fn apply(&self, rho_ab: &QState) -> Result<QState> {
        marginal_of_dilation(self, rho_ab)
    }
}

/// `Tr_M body(ρ_AB ⊗ σ_M)`, returned on the input's layout.
pub fn marginal_of_dilation(dil: &DilationSpec, rho_ab: &QState) -> Result<QState> {
    let (da, _, db) = dil.body.dims();
    let layout = rho_ab.layout();
    let mut labels = layout.labels();
    labels.sort_unstable();
    if labels != [LABEL_A, LABEL_B] {
        return Err(Error::LayoutMismatch(format!("expected a state on {{A, B}}, got {:?}", layout.labels())));
    }
    if layout.dim_of(LABEL_A)? != da || layout.dim_of(LABEL_B)? != db {
        return Err(Error::DimensionMismatch(format!(
            "state has d_A = {}, d_B = {}; dilation expects {da}, {db}",
            layout.dim_of(LABEL_A)?,
            layout.dim_of(LABEL_B)?
        )));
    }
    let joint = QState::product(&[rho_ab, &dil.sigma_m])?;
    let out = dil.body.apply(&joint)?;
    out.partial_trace(&layout.labels())?.permuted(&layout.labels())
}
