"""
UI module for ShapeletBoard
Contains the board styling and shared components
"""

import pandas as pd
import streamlit as st

from config import RUNS_CACHE_TTL, get_text
from artifacts import list_documents, list_manifests


def apply_custom_css():
    """Apply custom CSS for the board"""
    st.markdown(
        """
    <style>
        .stApp {
            background-color: #f5f5f5;
            color: #333333;
        }

        .main-header {
            font-size: 2.2em;
            font-weight: bold;
            text-align: center;
            margin: 10px 0 20px 0;
            color: #2c3e50;
        }

        .stTabs [data-baseweb="tab-list"] {
            background-color: #f8f9fa;
            border-radius: 8px 8px 0 0;
        }

        .stTabs [aria-selected="true"] {
            background-color: white !important;
        }

        [data-testid="stMetricValue"] {
            font-size: 1.6em;
        }
    </style>
    """,
        unsafe_allow_html=True,
    )


def render_header(title):
    """Render the page header"""
    st.markdown(f'<div class="main-header">{title}</div>', unsafe_allow_html=True)


@st.cache_data(ttl=RUNS_CACHE_TTL)
def get_manifests(runs_dir):
    """Manifests under runs_dir as a DataFrame"""
    return list_manifests(runs_dir)


@st.cache_data(ttl=RUNS_CACHE_TTL)
def get_documents(runs_dir, version):
    """(path, document) pairs with the given version under runs_dir"""
    return [(str(path), doc) for path, doc in list_documents(runs_dir, version)]


def render_csv_download(frame, file_name, key, header=True):
    """Download button for a DataFrame as CSV"""
    st.download_button(
        label=get_text("download_csv"),
        data=frame.to_csv(index=False, header=header),
        file_name=file_name,
        mime="text/csv",
        key=key,
    )


def shapelet_frame(shapelets):
    """One row per shapelet, padded with blanks to the longest length"""
    rows = [{"length": len(s), **{f"s{m}": v for m, v in enumerate(s)}} for s in shapelets]
    return pd.DataFrame(rows)
