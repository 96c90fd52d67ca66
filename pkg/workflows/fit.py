# workflows/fit.py
import streamlit as st

from aco import EnsembleResult, run_aco, summarize
from kinetics import MeasurementSet, attach_error_bars
from utils.config import RunConfig
from utils.io import load_measurements

from . import aco_settings, render_results

name = "Fit - Single ACO Run"


def prepare_data(config: RunConfig) -> MeasurementSet:
    """Load the measurement file; attach Poisson error bars when ROI volumes are configured."""
    data = load_measurements(config.data)
    if config.kidney_volume is not None:
        data = attach_error_bars(data, config.kidney_volume, config.bladder_volume, config.count_scale)
    return data


def run_fit(data: MeasurementSet, config: RunConfig) -> EnsembleResult:
    """One run with config.seed, reported as a one-run ensemble (std = 0)."""
    return summarize([run_aco(data, config.aco, config.seed)], data, config.aco)


# -------------------------------------------------------
#                       STREAMLIT UI
# -------------------------------------------------------
def render():
    st.header("Fit — Measurements → Rate Constants")

    uploaded_file = st.file_uploader(
        "Upload measurement CSV (t_min, blood, kidney, bladder)",
        type=["csv"],
        key="fit_data",
    )
    aco = aco_settings("fit")
    seed = st.number_input("Seed", min_value=0, value=0, step=1, key="fit_seed")

    if uploaded_file and st.button("Run fit", key="fit_run"):
        try:
            data = load_measurements(uploaded_file)
            config = RunConfig(mode="fit", data=uploaded_file.name, aco=aco, seed=int(seed))
            with st.spinner("Searching..."):
                result = run_fit(data, config)
            run = result.runs[0]
            if run.converged:
                st.success(f"✅ Converged after {run.iterations} iterations, cost {run.cost:.4g} ({run.case.value} case)")
            else:
                st.warning(f"⚠️ Stopped at max_iter ({run.iterations}), cost {run.cost:.4g}")
            st.line_chart(list(run.history))
            render_results(result, "fit")
        except Exception as e:
            st.error(f"❌ Error fitting measurement file: {e}")
