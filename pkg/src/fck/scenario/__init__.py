"""Scenario documents, output tables, metrics and the integrity auditor.

Import from the submodules (``document``, ``loader``, ``recorder``,
``metrics``, ``audit``, ``schema``); this package stays import-light so the
kernel can depend on the recorder and schema without cycles.
"""
