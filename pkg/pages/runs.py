"""
Runs page for ShapeletBoard
Overview of every manifest in the runs directory
"""

import streamlit as st

from config import get_text
from ui import get_manifests


def render_runs(runs_dir):
    """Render the runs overview page"""
    manifests = get_manifests(runs_dir)

    if manifests.empty:
        st.info(get_text("no_runs", path=runs_dir))
        return

    col1, col2 = st.columns(2)
    with col1:
        st.metric(get_text("total_runs"), len(manifests))
    with col2:
        st.metric(get_text("commands"), manifests["command"].nunique())

    st.dataframe(manifests, use_container_width=True, hide_index=True)
