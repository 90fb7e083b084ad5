//! C ABI over the quon library.
//!
//! Every fallible call returns a [`QuonStatus`]; on failure the message is
//! kept per thread and read with [`quon_last_error_message`]. Results are
//! written through out-pointers. Heap objects are opaque handles released
//! with their matching `_free` function.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use quon::bandfit::{fit_band, BandData, BandLevel, FitOptions};
use quon::fock::{vev_rewrite, Exact, MixedWord, Numeric};
use quon::models::{oscillator_energy, rotor_energy, OscillatorConfig, RotorConfig};
use quon::qnum::{q_bracket, DeformationParameter};
use quon::symsector::{
    classify_occupancy, ClassifyOptions, EnumerationLimits, GramSpectrum, OccupancyVector,
    SectorKind,
};
use quon::QuonError;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuonStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    CapExceeded = 3,
    NullState = 4,
    IllConditioned = 5,
    InsufficientData = 6,
    IoError = 7,
    NullPointer = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuonSector {
    Symmetric = 0,
    Antisymmetric = 1,
    Mixed = 2,
}

/// One eigenvalue cluster of a classified overlap matrix.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuonCluster {
    pub sector: QuonSector,
    /// 1-based rank among mixed clusters; 0 otherwise.
    pub ordinal: usize,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub is_null: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuonFit {
    pub a: f64,
    pub q: f64,
    pub sse: f64,
    pub rms_residual: f64,
    pub evaluations: usize,
    pub at_boundary: bool,
}

/// Classified overlap spectrum.
pub struct QuonSpectrum {
    inner: GramSpectrum,
}

/// Band levels collected before a fit.
pub struct QuonBand {
    levels: Vec<BandLevel>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &QuonError) -> QuonStatus {
    match err {
        QuonError::InvalidParameter(_) => QuonStatus::InvalidArgument,
        QuonError::Parse(_) | QuonError::Csv(_) => QuonStatus::ParseError,
        QuonError::CapExceeded { .. } => QuonStatus::CapExceeded,
        QuonError::NullState(_) => QuonStatus::NullState,
        QuonError::IllConditioned(_) => QuonStatus::IllConditioned,
        QuonError::InsufficientData(_) => QuonStatus::InsufficientData,
        QuonError::Io(_) => QuonStatus::IoError,
    }
}

enum Failure {
    Lib(QuonError),
    Status(QuonStatus, &'static str),
}

impl From<QuonError> for Failure {
    fn from(e: QuonError) -> Self {
        Failure::Lib(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> QuonStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(String::new());
            QuonStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg.into());
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            QuonStatus::Panic
        }
    }
}

unsafe fn out_ref<'a, T>(ptr: *mut T) -> Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or(Failure::Status(
        QuonStatus::NullPointer,
        "output pointer is null",
    ))
}

unsafe fn in_str<'a>(ptr: *const c_char) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(Failure::Status(
            QuonStatus::NullPointer,
            "string argument is null",
        ));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure::Status(QuonStatus::ParseError, "string argument is not UTF-8"))
}

/// Copies `text` plus a NUL into `buf`; `needed` receives the full size.
unsafe fn write_text(
    text: &str,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> Result<(), Failure> {
    if let Some(n) = needed.as_mut() {
        *n = text.len() + 1;
    }
    if buf.is_null() || len < text.len() + 1 {
        return Err(Failure::Status(
            QuonStatus::BufferTooSmall,
            "output buffer too small",
        ));
    }
    std::ptr::copy_nonoverlapping(text.as_ptr().cast::<c_char>(), buf, text.len());
    *buf.add(text.len()) = 0;
    Ok(())
}

/// Message of the last failed call on this thread. Returns the buffer size
/// needed including the NUL; copies nothing when `len` is too small.
#[no_mangle]
pub unsafe extern "C" fn quon_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > msg.len() {
            std::ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, msg.len());
            *buf.add(msg.len()) = 0;
        }
        msg.len() + 1
    })
}

#[no_mangle]
pub unsafe extern "C" fn quon_q_bracket(n: u32, q: f64, out: *mut f64) -> QuonStatus {
    guard(|| {
        let q = DeformationParameter::new(q)?;
        *out_ref(out)? = q_bracket(n, q.value());
        Ok(())
    })
}

/// Vacuum expectation value of an operator string such as `"a2 a1 ad2 ad1"`.
#[no_mangle]
pub unsafe extern "C" fn quon_vev(word: *const c_char, q: f64, out: *mut f64) -> QuonStatus {
    guard(|| {
        let word: MixedWord = in_str(word)?.parse()?;
        let q = DeformationParameter::new(q)?;
        *out_ref(out)? = vev_rewrite(&word, &Numeric::new(q.value()));
        Ok(())
    })
}

/// Exact vacuum expectation value as a polynomial in `q`, e.g. `"1 + q"`.
#[no_mangle]
pub unsafe extern "C" fn quon_vev_exact(
    word: *const c_char,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> QuonStatus {
    guard(|| {
        let word: MixedWord = in_str(word)?.parse()?;
        write_text(&vev_rewrite(&word, &Exact).to_string(), buf, len, needed)
    })
}

#[no_mangle]
pub unsafe extern "C" fn quon_oscillator_energy(
    n: u32,
    hbar_omega: f64,
    q: f64,
    out: *mut f64,
) -> QuonStatus {
    guard(|| {
        let cfg = OscillatorConfig::new(hbar_omega, DeformationParameter::new(q)?)?;
        *out_ref(out)? = oscillator_energy(n, &cfg);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn quon_rotor_energy(
    l: u32,
    inertia_a: f64,
    q: f64,
    out: *mut f64,
) -> QuonStatus {
    guard(|| {
        let cfg = RotorConfig::new(inertia_a, DeformationParameter::new(q)?)?;
        *out_ref(out)? = rotor_energy(l, &cfg);
        Ok(())
    })
}

/// Classifies the orderings of an occupancy such as `"1:1 2:1 3:1"` at `q`.
#[no_mangle]
pub unsafe extern "C" fn quon_classify(
    occupancy: *const c_char,
    q: f64,
    out: *mut *mut QuonSpectrum,
) -> QuonStatus {
    guard(|| {
        let slot = out_ref(out)?;
        *slot = std::ptr::null_mut();
        let occ: OccupancyVector = in_str(occupancy)?.parse()?;
        let q = DeformationParameter::new(q)?;
        let inner = classify_occupancy(
            &occ,
            q.value(),
            false,
            &ClassifyOptions::default(),
            &EnumerationLimits::default(),
        )?;
        *slot = Box::into_raw(Box::new(QuonSpectrum { inner }));
        Ok(())
    })
}

/// Number of clusters; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn quon_spectrum_cluster_count(spectrum: *const QuonSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.inner.clusters.len())
}

#[no_mangle]
pub unsafe extern "C" fn quon_spectrum_cluster(
    spectrum: *const QuonSpectrum,
    index: usize,
    out: *mut QuonCluster,
) -> QuonStatus {
    guard(|| {
        let s = spectrum.as_ref().ok_or(Failure::Status(
            QuonStatus::NullPointer,
            "spectrum handle is null",
        ))?;
        let c = s.inner.clusters.get(index).ok_or(Failure::Status(
            QuonStatus::InvalidArgument,
            "cluster index out of range",
        ))?;
        *out_ref(out)? = QuonCluster {
            sector: match c.label.kind {
                SectorKind::Symmetric => QuonSector::Symmetric,
                SectorKind::Antisymmetric => QuonSector::Antisymmetric,
                SectorKind::Mixed => QuonSector::Mixed,
            },
            ordinal: c.label.ordinal,
            eigenvalue: c.eigenvalue,
            multiplicity: c.multiplicity,
            is_null: c.is_null,
        };
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn quon_spectrum_free(spectrum: *mut QuonSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

#[no_mangle]
pub extern "C" fn quon_band_new() -> *mut QuonBand {
    Box::into_raw(Box::new(QuonBand { levels: Vec::new() }))
}

/// Reads a band CSV (`l,energy_kev[,weight]`).
#[no_mangle]
pub unsafe extern "C" fn quon_band_from_csv(
    path: *const c_char,
    out: *mut *mut QuonBand,
) -> QuonStatus {
    guard(|| {
        let slot = out_ref(out)?;
        *slot = std::ptr::null_mut();
        let band = BandData::from_path(Path::new(in_str(path)?))?;
        *slot = Box::into_raw(Box::new(QuonBand {
            levels: band.levels().to_vec(),
        }));
        Ok(())
    })
}

/// Appends a level; the band is validated when fitted.
#[no_mangle]
pub unsafe extern "C" fn quon_band_push(
    band: *mut QuonBand,
    l: u32,
    energy: f64,
    weight: f64,
) -> QuonStatus {
    guard(|| {
        out_ref(band)?.levels.push(BandLevel { l, energy, weight });
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn quon_band_len(band: *const QuonBand) -> usize {
    band.as_ref().map_or(0, |b| b.levels.len())
}

#[no_mangle]
pub unsafe extern "C" fn quon_band_free(band: *mut QuonBand) {
    if !band.is_null() {
        drop(Box::from_raw(band));
    }
}

/// Fits `(A, q)` with `q` searched in `[q_min, q_max]`.
#[no_mangle]
pub unsafe extern "C" fn quon_fit_band(
    band: *const QuonBand,
    q_min: f64,
    q_max: f64,
    out: *mut QuonFit,
) -> QuonStatus {
    guard(|| {
        let band = band.as_ref().ok_or(Failure::Status(
            QuonStatus::NullPointer,
            "band handle is null",
        ))?;
        let data = BandData::new(band.levels.clone())?;
        let opts = FitOptions {
            q_min,
            q_max,
            ..FitOptions::default()
        };
        let fit = fit_band(&data, &opts)?;
        *out_ref(out)? = QuonFit {
            a: fit.a,
            q: fit.q.value(),
            sse: fit.sse,
            rms_residual: fit.rms_residual,
            evaluations: fit.evaluations,
            at_boundary: fit.at_boundary,
        };
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(
            status_of(&QuonError::CapExceeded {
                what: "x",
                requested: 2,
                limit: 1
            }),
            QuonStatus::CapExceeded
        );
        assert_eq!(
            status_of(&QuonError::Parse("x".into())),
            QuonStatus::ParseError
        );
    }

    #[test]
    fn panics_are_contained() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, QuonStatus::Panic);
    }

    #[test]
    fn text_buffer_sizing() {
        let mut needed = 0;
        let mut small = [0 as c_char; 2];
        let s =
            guard(|| unsafe { write_text("1 + q", small.as_mut_ptr(), small.len(), &mut needed) });
        assert_eq!(s, QuonStatus::BufferTooSmall);
        assert_eq!(needed, 6);
    }
}
