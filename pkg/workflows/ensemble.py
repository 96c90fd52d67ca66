# workflows/ensemble.py
import streamlit as st

from aco import EnsembleResult, ensemble
from kinetics import MeasurementSet
from utils.config import RunConfig
from utils.io import load_measurements

from . import aco_settings, render_results

name = "Ensemble - Repeated Runs"


def run_ensemble(data: MeasurementSet, config: RunConfig) -> EnsembleResult:
    return ensemble(data, config.aco, config.n_runs, config.run_seeds())


# -------------------------------------------------------
#                       STREAMLIT UI
# -------------------------------------------------------
def render():
    st.header("Ensemble — Mean, Std and Confidence Strips")

    uploaded_file = st.file_uploader(
        "Upload measurement CSV (t_min, blood, kidney, bladder)",
        type=["csv"],
        key="ens_data",
    )
    aco = aco_settings("ens")
    runs = st.number_input("Runs", min_value=1, max_value=200, value=30, key="ens_runs")
    seed = st.number_input("First seed", min_value=0, value=0, step=1, key="ens_seed")
    shared = st.checkbox("Start every run from the same population", value=aco.shared_init, key="ens_shared")

    if uploaded_file and st.button("Run ensemble", key="ens_run"):
        try:
            data = load_measurements(uploaded_file)
            config = RunConfig(
                mode="ensemble",
                data=uploaded_file.name,
                aco=aco.updated(shared_init=shared),
                runs=int(runs),
                seed=int(seed),
            )
            with st.spinner(f"Running {config.n_runs} searches..."):
                result = run_ensemble(data, config)
            st.info(f"Best run: seed {result.best.seed}, cost {result.best.cost:.4g}")
            if result.initial is not None:
                st.caption("Initial values: " + ", ".join(f"{k} = {v:.4g}" for k, v in result.initial.as_dict().items()))
            render_results(result, "ens")
        except Exception as e:
            st.error(f"❌ Error running ensemble: {e}")
