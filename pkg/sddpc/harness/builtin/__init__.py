"""Scenario files shipped with sddpc, loaded by name through `builtin_names`."""
