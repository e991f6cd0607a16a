"""
ShapeletBoard - Main Application
Read-only board over training, evaluation and benchmark runs
"""

import os

import streamlit as st
from config import ENV_PREFIX, PAGE_CONFIG, get_text
from ui import apply_custom_css, render_header
from pages.runs import render_runs
from pages.model import render_model
from pages.evaluation import render_evaluation

# Page configuration
st.set_page_config(**PAGE_CONFIG)

# Apply custom CSS
apply_custom_css()

# Initialize session state
if "runs_dir" not in st.session_state:
    st.session_state.runs_dir = os.environ.get(f"{ENV_PREFIX}RUNS_DIR", ".")

render_header(get_text("app_title"))

runs_dir = st.text_input(get_text("runs_dir"), key="runs_dir")
if not os.path.isdir(runs_dir):
    st.error(get_text("data_error", detail=f"{runs_dir} is not a directory"))
    st.stop()

# Navigation
page_options = [
    get_text("runs"),
    get_text("model"),
    get_text("evaluation"),
]

page = st.selectbox(
    "Navigation",
    page_options,
    index=0,
    label_visibility="collapsed",
)

# Render the selected page
if page == get_text("runs"):
    render_runs(runs_dir)
elif page == get_text("model"):
    render_model(runs_dir)
elif page == get_text("evaluation"):
    render_evaluation(runs_dir)
