use pyo3::prelude::*;

#[pymodule]
fn radsurv_py(_py: Python<'_>, _m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
