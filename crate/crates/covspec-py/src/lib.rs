use pyo3::prelude::*;

#[pymodule]
fn covspec(_py: Python<'_>, _m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
