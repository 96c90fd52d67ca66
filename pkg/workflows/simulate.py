# workflows/simulate.py
import logging

import streamlit as st

from kinetics import GammaVariateParams, MeasurementSet, attach_error_bars, simulate_measurements
from utils import csv_to_bytes, excel_to_bytes
from utils.config import DEFAULT_TRUTH, LOWER_TRIANGULAR_TRUTH, RunConfig
from utils.io import measurements_frame

logger = logging.getLogger(__name__)

name = "Simulate - Synthetic Data"

TRUTH_PRESETS = {"Full matrix": DEFAULT_TRUTH, "Lower triangular (k_tp = 0)": LOWER_TRIANGULAR_TRUTH}


# -------------------------------------------------------
#   TRANSFORMATION: ground truth  →  noisy measurements
# -------------------------------------------------------
def run_simulation(config: RunConfig) -> MeasurementSet:
    data = simulate_measurements(
        config.truth,
        config.gamma,
        config.schedule,
        noise_scale=config.noise_scale,
        seed=config.seed,
        blood_fraction=config.blood_fraction,
    )
    if config.kidney_volume is not None:
        data = attach_error_bars(data, config.kidney_volume, config.bladder_volume, config.count_scale)
    logger.info("simulated %d frames for %s", len(data), config.truth)
    return data


# -------------------------------------------------------
#                       STREAMLIT UI
# -------------------------------------------------------
def render():
    st.header("Simulate — Gamma-Variate Input → Kidney/Bladder Curves")

    preset = st.selectbox("Ground truth", list(TRUTH_PRESETS), key="sim_truth")
    st.caption(", ".join(f"{k} = {v:g}" for k, v in TRUTH_PRESETS[preset].as_dict().items()))

    col1, col2 = st.columns(2)
    with col1:
        amplitude = st.number_input("Amplitude A", min_value=0.0, value=10.0, key="sim_a")
        t0 = st.number_input("t0 (min)", min_value=0.0, value=0.2, key="sim_t0")
        alpha = st.number_input("alpha", min_value=0.01, value=2.0, key="sim_alpha")
        beta = st.number_input("beta (min)", min_value=0.01, value=1.5, key="sim_beta")
    with col2:
        noise_scale = st.number_input("Noise scale (0 = noiseless)", min_value=0.0, value=1000.0, key="sim_noise")
        blood_fraction = st.number_input("Blood fraction V_b", min_value=0.0, max_value=0.99, value=0.0, key="sim_vb")
        seed = st.number_input("Seed", min_value=0, value=0, step=1, key="sim_seed")

    if st.button("Simulate", key="sim_run"):
        try:
            config = RunConfig(
                mode="simulate",
                truth=TRUTH_PRESETS[preset],
                gamma=GammaVariateParams(amplitude, t0, alpha, beta),
                noise_scale=noise_scale,
                blood_fraction=blood_fraction,
                seed=int(seed),
            )
            df_out = measurements_frame(run_simulation(config))

            st.subheader("Preview — Measurements")
            st.line_chart(df_out.set_index("t_min"))
            st.dataframe(df_out)

            st.download_button(
                "📥 Download measurements.csv", csv_to_bytes(df_out), file_name="measurements.csv", key="sim_csv"
            )
            st.download_button(
                "📥 Download measurements.xlsx",
                excel_to_bytes(df_out, sheet_name="measurements"),
                file_name="measurements.xlsx",
                key="sim_xlsx",
            )
        except Exception as e:
            st.error(f"❌ Error simulating data: {e}")
