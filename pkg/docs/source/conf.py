# Sphinx configuration of the qmix documentation.
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys

# autodoc imports qmix from the checkout
sys.path.insert(0, os.path.abspath('../../'))

project = 'qmix'
copyright = '2026, The qmix authors'
author = 'The qmix authors'
master_doc = 'index'
release = '0.1.0'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.mathjax',
]

# numpy style sections in the docstrings
napoleon_google_docstring = False
napoleon_numpy_docstring = True

autodoc_member_order = 'bysource'

templates_path = ['_templates']
exclude_patterns = []

html_theme = 'alabaster'
html_static_path = ['_static']
