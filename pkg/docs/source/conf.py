# Sphinx configuration for the PyGTaylor documentation.

import os
import sys

sys.path.insert(0, os.path.abspath('../../'))

from gtaylor import __version__  # noqa: E402

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.viewcode',
    'sphinx.ext.githubpages',
]

source_suffix = '.rst'
master_doc = 'index'

project = 'PyGTaylor'
copyright = '2026, PyGTaylor developers'
author = 'PyGTaylor developers'
version = __version__
release = __version__

language = 'en'
exclude_patterns = []

add_function_parentheses = False
add_module_names = False
autodoc_member_order = 'bysource'
pygments_style = 'sphinx'

html_theme = 'alabaster'
htmlhelp_basename = 'PyGTaylordoc'

man_pages = [
    (master_doc, 'gt', 'PyGTaylor Documentation', [author], 1)
]
