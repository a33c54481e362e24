use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::error::Result;
use crate::fieldgrid::{
    convolve_direct_sym, kernel_field, kernel_moments, ConvMode, GridField, KernelFft, KernelSpec,
    ParabolicGrid, PolyField,
};
use crate::indexcalc::{GradeKind, GradedValue, HomParams, IndexSet, MultiIndex, PolyExp};
use crate::tensoralg::{nonlin_tensors, LieData, NonlinTensors, WBasis};

/// Shared immutable data for building models: grid, algebra, homogeneity
/// parameters, the sampled kernel with its spectrum and moments, and a basis
/// cache for the tensor spaces.
pub struct ModelContext {
    pub grid: ParabolicGrid,
    pub lie: LieData,
    pub params: HomParams,
    pub kernel_spec: KernelSpec,
    pub conv_mode: ConvMode,
    pub tensors: NonlinTensors,
    kernel: GridField,
    kernel_fft: KernelFft,
    kernel_moments: BTreeMap<PolyExp, f64>,
    bases: Mutex<BTreeMap<MultiIndex, Arc<WBasis>>>,
}

impl ModelContext {
    pub fn new(
        grid: ParabolicGrid,
        lie: LieData,
        params: HomParams,
        kernel_spec: KernelSpec,
        conv_mode: ConvMode,
    ) -> Result<Arc<Self>> {
        let kernel = kernel_field(&grid, &kernel_spec)?;
        let kernel_fft = KernelFft::new(&kernel)?;
        // moments up to the largest polynomial degree a desk-scale lift uses
        let kernel_moments = kernel_moments(&kernel, 4);
        Ok(Arc::new(ModelContext {
            grid,
            lie,
            params,
            kernel_spec,
            conv_mode,
            tensors: nonlin_tensors(),
            kernel,
            kernel_fft,
            kernel_moments,
            bases: Mutex::new(BTreeMap::new()),
        }))
    }

    pub fn dim_v(&self) -> usize {
        self.lie.dim_v()
    }

    pub fn kernel(&self) -> &GridField {
        &self.kernel
    }

    pub fn kernel_moments(&self) -> &BTreeMap<PolyExp, f64> {
        &self.kernel_moments
    }

    /// `K * field` in the configured convolution mode.
    pub fn apply_kernel(&self, field: &GridField) -> Result<GridField> {
        match self.conv_mode {
            ConvMode::Fft => self.kernel_fft.convolve(field),
            ConvMode::DirectSym => convolve_direct_sym(&self.kernel, field),
        }
    }

    /// Exact kernel action on a polynomial via the grid moments.
    pub fn apply_kernel_poly(&self, p: &PolyField) -> PolyField {
        crate::fieldgrid::apply_kernel_to_poly(&self.kernel_moments, p)
    }

    pub fn basis(&self, beta: &MultiIndex) -> Arc<WBasis> {
        let mut map = self.bases.lock().unwrap();
        map.entry(beta.clone())
            .or_insert_with(|| Arc::new(WBasis::new(beta, self.lie.dim_v())))
            .clone()
    }

    pub fn grade(&self, beta: &MultiIndex) -> GradedValue {
        self.params.grade(beta, GradeKind::Plain)
    }

    /// The construction universe below a plain-grade bound.
    pub fn universe(&self, bound: &GradedValue) -> Result<IndexSet> {
        IndexSet::universe(bound, &self.params)
    }
}
