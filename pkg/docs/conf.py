# -*- coding: utf-8 -*-
#
# contextbp documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing
# dir. Only the values that differ from the Sphinx defaults are set here.

import sys, os

# Make the package importable for autodoc:
sys.path.insert(0, os.path.abspath('..'))
import contextbp

# -- General configuration -----------------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.intersphinx', 'sphinx.ext.viewcode']
templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'contextbp'
copyright = u'2026 The contextbp developers'

# The short X.Y version and the full version, including alpha/beta/rc tags.
version = ".".join(contextbp.__version__.split(".", 2)[:2])
release = contextbp.__version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output ---------------------------------------------------

html_theme = 'nature'
html_static_path = ['_static']
htmlhelp_basename = 'contextbpdoc'

# -- Options for LaTeX output --------------------------------------------------

latex_elements = {
}
latex_documents = [
  ('index', 'contextbp.tex', u'contextbp Documentation',
   u'The contextbp developers', 'manual'),
]

# -- Options for manual page output --------------------------------------------

man_pages = [
    ('index', 'contextbp', u'contextbp Documentation',
     [u'The contextbp developers'], 1)
]

# -- Options for Texinfo output ------------------------------------------------

texinfo_documents = [
  ('index', 'contextbp', u'contextbp Documentation',
   u'The contextbp developers', 'contextbp',
   'Exact constrained generation for variable-order Markov models.',
   'Miscellaneous'),
]

intersphinx_mapping = {'python': ('https://docs.python.org/3', None),
                       'numpy': ('https://numpy.org/doc/stable/', None)}
