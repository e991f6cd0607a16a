"""
Model page for ShapeletBoard
Learned shapelets, loss history and resolved training config of one model
"""

import pandas as pd
import streamlit as st

from config import LOSS_COLUMNS, MODEL_VERSION, get_text
from errors import DataError
from training import TrainedModel
from ui import get_documents, render_csv_download, shapelet_frame


def render_model(runs_dir):
    """Render the model inspection page"""
    documents = dict(get_documents(runs_dir, MODEL_VERSION))

    if not documents:
        st.info(get_text("no_models", path=runs_dir))
        return

    path = st.selectbox(get_text("select_model"), sorted(documents))
    try:
        model = TrainedModel.from_dict(documents[path])
    except DataError as e:
        st.error(get_text("data_error", detail=e))
        return

    col1, col2, col3, col4 = st.columns(4)
    with col1:
        st.metric(get_text("shapelet_count"), model.bank.count)
    with col2:
        st.metric(get_text("nominal_length"), model.bank.nominal_length)
    with col3:
        st.metric(get_text("iterations"), model.n_iterations)
    with col4:
        final = model.loss_history[-1].total if model.loss_history else float("nan")
        st.metric(get_text("final_loss"), f"{final:.6g}")

    tabs = st.tabs([get_text("shapelets_tab"), get_text("loss_tab"), get_text("config_tab")])

    with tabs[0]:
        shapelets = shapelet_frame(model.bank.shapelets)
        st.dataframe(shapelets, use_container_width=True)
        render_csv_download(shapelets, "shapelets.csv", key="shapelets_csv")

    with tabs[1]:
        history = pd.DataFrame([entry.to_dict() for entry in model.loss_history], columns=LOSS_COLUMNS)
        history.insert(0, "iteration", range(1, len(history) + 1))
        st.dataframe(history, use_container_width=True, hide_index=True)
        render_csv_download(history, "loss.csv", key="loss_csv")

    with tabs[2]:
        st.json(model.config.to_dict())
