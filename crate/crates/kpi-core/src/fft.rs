//! Thin wrappers around rustfft for multi-axis complex transforms.
//!
//! Plans are cached per length in a thread-local table; all transforms are
//! single-threaded and bitwise deterministic.

use ndarray::{Array2, Array3, Axis};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

thread_local! {
    static FORWARD: RefCell<HashMap<usize, Arc<dyn Fft<f64>>>> = RefCell::new(HashMap::new());
    static INVERSE: RefCell<HashMap<usize, Arc<dyn Fft<f64>>>> = RefCell::new(HashMap::new());
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let table = if forward { &FORWARD } else { &INVERSE };
    table.with(|t| {
        t.borrow_mut()
            .entry(n)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                if forward {
                    planner.plan_fft_forward(n)
                } else {
                    planner.plan_fft_inverse(n)
                }
            })
            .clone()
    })
}

/// Unnormalized FFT along one contiguous buffer.
pub fn fft_1d(buf: &mut [Complex64], forward: bool) {
    plan(buf.len(), forward).process(buf);
}

/// Unnormalized FFT along every lane of the given axis.
pub fn fft_axis2(a: &mut Array2<Complex64>, axis: usize, forward: bool) {
    let n = a.shape()[axis];
    let p = plan(n, forward);
    let mut scratch = vec![Complex64::default(); n];
    for mut lane in a.lanes_mut(Axis(axis)) {
        if let Some(s) = lane.as_slice_mut() {
            p.process(s);
        } else {
            for (d, s) in scratch.iter_mut().zip(lane.iter()) {
                *d = *s;
            }
            p.process(&mut scratch);
            for (s, d) in lane.iter_mut().zip(scratch.iter()) {
                *s = *d;
            }
        }
    }
}

/// Unnormalized FFT along every lane of the given axis of a 3-d array.
pub fn fft_axis3(a: &mut Array3<Complex64>, axis: usize, forward: bool) {
    let n = a.shape()[axis];
    let p = plan(n, forward);
    let mut scratch = vec![Complex64::default(); n];
    for mut lane in a.lanes_mut(Axis(axis)) {
        if let Some(s) = lane.as_slice_mut() {
            p.process(s);
        } else {
            for (d, s) in scratch.iter_mut().zip(lane.iter()) {
                *d = *s;
            }
            p.process(&mut scratch);
            for (s, d) in lane.iter_mut().zip(scratch.iter()) {
                *s = *d;
            }
        }
    }
}

/// Unnormalized 2-d FFT (both axes).
pub fn fft_2d(a: &mut Array2<Complex64>, forward: bool) {
    fft_axis2(a, 1, forward);
    fft_axis2(a, 0, forward);
}

/// Unnormalized 3-d FFT (all axes).
pub fn fft_3d(a: &mut Array3<Complex64>, forward: bool) {
    fft_axis3(a, 2, forward);
    fft_axis3(a, 1, forward);
    fft_axis3(a, 0, forward);
}
