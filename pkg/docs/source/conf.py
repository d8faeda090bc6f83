#
# nlrepr documentation build configuration file.
#

import os
from datetime import datetime, timezone

HERE = os.path.dirname(__file__)

# Automatically generate config_options.rst
with open(os.path.join(HERE, "..", "autogen_config.py")) as f:
    exec(compile(f.read(), "autogen_config.py", "exec"), {})  # noqa: S102
    print("Created docs for config options")

# -- General configuration ------------------------------------------------

extensions = [
    "myst_parser",
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
]

templates_path = ["_templates"]
source_suffix = [".rst"]
master_doc = "index"

project = "nlrepr"
year = datetime.now(tz=timezone.utc).date().year
copyright = "2024-%s, nlrepr Development Team" % year
author = "nlrepr Development Team"

# Get information from _version.py and use it to generate version and release
_version_py = os.path.join(HERE, "../../nlrepr/_version.py")
version_ns = {}
with open(_version_py) as f:
    exec(compile(f.read(), _version_py, "exec"), version_ns)  # noqa: S102
version = "%i.%i" % version_ns["version_info"][:2]
release = version_ns["__version__"]

language = "en"
default_role = "any"
todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = "pydata_sphinx_theme"
html_theme_options = {
    # prefer browser defaults over custom JS keyboard event handlers
    "navigation_with_keys": False,
}
html_static_path = ["_static"]
htmlhelp_basename = "nlreprdoc"

man_pages = [(master_doc, "nlrepr", "nlrepr Documentation", [author], 1)]

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable", None),
    "pandas": ("https://pandas.pydata.org/docs", None),
    "traitlets": ("https://traitlets.readthedocs.io/en/latest", None),
}
