# workflows/__init__.py
from aco import AcoConfig
from utils import csv_to_bytes, workbook_to_bytes
from utils.io import coefficients_frame, runs_frame, strips_frame

PRESETS = {"Synthetic data": AcoConfig.synthetic, "ROI measurements": AcoConfig.real_data}


def aco_settings(key):
    """Preset selector plus the few knobs worth touching from the UI."""
    import streamlit as st

    preset = st.selectbox("ACO preset", list(PRESETS), key=f"{key}_preset")
    base = PRESETS[preset]()
    with st.expander("ACO settings"):
        population = st.number_input("Population size P", min_value=2, value=base.population_size, key=f"{key}_p")
        q = st.number_input("q", min_value=1e-6, value=base.q, format="%.6f", key=f"{key}_q")
        xi = st.number_input("xi", min_value=1e-3, value=base.xi, key=f"{key}_xi")
        max_iter = st.number_input("Max iterations", min_value=1, value=base.max_iter, key=f"{key}_iter")
        v_b = st.number_input("Blood fraction V_b", min_value=0.0, max_value=0.99, value=base.v_b, key=f"{key}_vb")
    return base.updated(population_size=int(population), q=q, xi=xi, max_iter=int(max_iter), v_b=v_b)


def render_results(result, key):
    """Coefficient table, strip plot and downloads for an EnsembleResult."""
    import streamlit as st

    coefficients = coefficients_frame(result)
    strips = strips_frame(result)
    runs = runs_frame(result)

    st.subheader("Coefficients")
    st.dataframe(coefficients)
    st.subheader("Confidence strips")
    st.line_chart(strips.set_index("t_min"))

    st.download_button(
        "📥 Download coefficients.csv",
        csv_to_bytes(coefficients.reset_index(names="stat")),
        file_name="coefficients.csv",
        key=f"{key}_coef",
    )
    st.download_button("📥 Download strips.csv", csv_to_bytes(strips), file_name="strips.csv", key=f"{key}_strips")
    output = workbook_to_bytes(
        {"coefficients": coefficients.reset_index(names="stat"), "strips": strips, "runs": runs}
    )
    st.download_button("📥 Download results.xlsx", output, file_name="results.xlsx", key=f"{key}_xlsx")
