# Configuration file for the Sphinx documentation builder.
#
# For the full list of built-in configuration values, see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

from __future__ import annotations

import pathlib
import sys
from datetime import datetime

path = pathlib.Path(__file__)
sys.path.append(path.parent.parent.as_posix() + '/src')
import lmgr  # noqa: E402

project = 'lmgr'
copyright = f'2024-{datetime.now().year}, lmgr developers'
release = lmgr.__version__

# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.intersphinx',
    'sphinx.ext.viewcode',
    'numpydoc',
    'sphinx_autodoc_typehints',
    'sphinx_copybutton',
    'myst_nb',
]

source_suffix = {
    '.rst': 'restructuredtext',
    '.md': 'myst-nb',
}

templates_path = ['_templates']
exclude_patterns = ['_build']

# -- Options for HTML output -------------------------------------------------

html_theme = 'pydata_sphinx_theme'
html_theme_options = {
    'show_nav_level': 2,
    'footer_start': ['copyright'],
}
html_title = 'lmgr'
html_show_sourcelink = False
master_doc = 'index'

add_module_names = False
autodoc_member_order = 'bysource'

copybutton_selector = 'div:not(.output) > div.highlight pre'

intersphinx_mapping = {
    'python': ('https://docs.python.org/3.9', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
}

myst_enable_extensions = ['colon_fence']

nb_execution_mode = 'off'

numpydoc_attributes_as_param_list = False
numpydoc_class_members_toctree = False
numpydoc_show_class_members = True
numpydoc_xref_aliases = {
    'Fact': 'lmgr.planning.strips.Fact',
    'Action': 'lmgr.planning.strips.Action',
    'GroundedProblem': 'lmgr.planning.strips.GroundedProblem',
    'LandmarkSet': 'lmgr.landmarks.base.LandmarkSet',
    'RecognitionBundle': 'lmgr.pddl.bundle.RecognitionBundle',
    'RecognitionConfig': 'lmgr.recognition.recognizer.RecognitionConfig',
}
numpydoc_xref_param_type = True
numpydoc_xref_ignore = {'or', 'optional', 'of'}
pygments_style = 'sphinx'

typehints_document_rtype = False
typehints_use_signature = True
typehints_use_signature_return = True
