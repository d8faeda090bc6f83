"""
autogen_config.py

Create config_options.rst, a Sphinx documentation source file.
Documents the options that may be set in an nlrepr settings file
(``--settings nlrepr_config.py``) or on the command line.

"""

import os.path

from nlrepr.nlreprapp import NlreprApp

header = """\

.. This is an automatically generated file.
.. do not modify by hand.

Configuration options
=====================

Configuration options may be set in a settings file passed with
``--settings``, or at the command line, i.e. ``nlrepr repr solve --NlreprBase.tol_root=1e-12``.

The most specific setting will always be used. Every solver and task
inherits from NlreprBase, so with the following config

.. code-block:: python

    c.NlreprBase.threads = 1  # The default
    c.StoppingSolver.threads = 4

only the enumeration oracle of the stopping solver runs rule batches in
parallel.

CLI Flags and Aliases
---------------------

The log level defaults to the value of the environment variable
``NLREPR_LOG`` (``off``, ``info`` or ``debug``).

When using nlrepr from the command line, a number of aliases and flags are
defined as shortcuts to configuration options for convenience.

"""

try:
    indir = os.path.dirname(__file__)
except NameError:
    indir = os.path.dirname(os.getcwd())
destination = os.path.join(indir, "source/config_options.rst")

with open(destination, "w") as f:
    app = NlreprApp()
    f.write(header)
    f.write(app.document_flag_help())
    f.write(app.document_alias_help())
    f.write(app.document_config_options())
