"""
Evaluation page for ShapeletBoard
Rand Index of every evaluation report, best per feature kind
"""

import pandas as pd
import streamlit as st

from config import REPORT_VERSION, get_text
from ui import get_documents


def render_evaluation(runs_dir):
    """Render the evaluation reports page"""
    documents = get_documents(runs_dir, REPORT_VERSION)

    if not documents:
        st.info(get_text("no_reports", path=runs_dir))
        return

    reports = pd.DataFrame(
        [
            {
                "path": path,
                "feature_kind": doc.get("feature_kind", ""),
                "seed": doc.get("seed"),
                "restarts": doc.get("restarts"),
                "n_samples": doc.get("n_samples"),
                "n_clusters": doc.get("n_clusters"),
                "rand_index": doc.get("rand_index"),
            }
            for path, doc in documents
        ]
    )

    best = reports.groupby("feature_kind")["rand_index"].max()
    columns = st.columns(len(best))
    for column, (kind, value) in zip(columns, best.items()):
        with column:
            st.metric(get_text("best_ri", kind=kind), f"{value:.4f}")

    st.dataframe(
        reports.sort_values("rand_index", ascending=False),
        use_container_width=True,
        hide_index=True,
    )
