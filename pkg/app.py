import importlib
import logging
import os
import pkgutil
from pathlib import Path

import streamlit as st

import workflows

logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")


# -----------------------------
# Function to dynamically load workflow pages
# -----------------------------
@st.cache_resource(ttl=10)  # refresh every 10 seconds
def load_workflow_modules():
    """Import every module in /workflows that exposes `name` and `render`."""
    modules = {}
    for _, mod_name, _ in pkgutil.iter_modules(workflows.__path__):
        try:
            mod = importlib.import_module(f"workflows.{mod_name}")
            if hasattr(mod, "render") and hasattr(mod, "name"):
                modules[mod_name] = mod
        except Exception as e:
            st.warning(f"⚠️ Failed to load workflow '{mod_name}': {e}")
    return dict(sorted(modules.items(), key=lambda item: item[1].name))


# -----------------------------
# Auto-refresh trigger (check folder timestamp)
# -----------------------------
def folder_last_modified(folder: Path):
    return max(os.path.getmtime(p) for p in folder.rglob("*.py"))


workflows_path = Path(workflows.__path__[0])
last_refresh_time = st.session_state.get("last_refresh_time", 0)
current_mod_time = folder_last_modified(workflows_path)

if current_mod_time > last_refresh_time:
    st.cache_resource.clear()
    st.session_state["last_refresh_time"] = current_mod_time

workflow_modules = load_workflow_modules()

# -----------------------------
# Sidebar Navigation
# -----------------------------
st.sidebar.title("Workflows")
pages = ["🏠 Home"] + [mod.name for mod in workflow_modules.values()]
choice = st.sidebar.radio("Choose page", pages)

if choice == "🏠 Home":
    st.title("🩺 Renal Kinetics ACO Tool")
    st.markdown(
        """
        Rate constants of the three-compartment renal model (blood → tissue ⇄ pre-urine → bladder)
        from kidney and bladder time-activity curves.

        **Simulate -** Generate 27-frame synthetic data from a gamma-variate input function with Poisson noise.

        **Fit -** Upload a measurement CSV (`t_min, blood, kidney, bladder`) and run one ant colony search.

        **Ensemble -** Repeat the search over many seeds; get mean/std per coefficient and confidence strips.

        **Validate -** Check the closed-form solutions against the RK4 reference integrator.

        The same workflows run headless through `python cli.py <simulate|fit|ensemble|validate>`.
        """
    )
else:
    for mod in workflow_modules.values():
        if mod.name == choice:
            mod.render()
            break
