"""
Configuration files and the command line
========================================

Runs are described by small TOML files with unit strings. The same files
drive the ``optosqueeze`` command.
"""

# %%
import tempfile

from optosqueeze import cli
from optosqueeze.config import dump_config, load_config, parse_config

text = """
units = "natural"
omega_m = 1.0
C_D = 0.3
C_S = 1.5
n_thermal = 0.0
t_end = "2 periods"
n_points = 50
"""
cfg = parse_config(text)
print(cfg.couplings())

# %% Canonical form; parsing it again gives back the same run
canonical = dump_config(load_config("fig2.cfg"))
print(canonical)
assert parse_config(canonical) == load_config("fig2.cfg")

# %% Every subcommand writes CSV (or JSON) into an output directory
with tempfile.TemporaryDirectory() as out:
    for sub in ("derive", "evolve", "figures"):
        code = cli.main([sub, "--config", "toy.cfg", "--out", out])
        print(sub, "exit", code)
    # oracle refuses realistic parameters with exit code 3
    print("oracle on fig2.cfg exit", cli.main(["oracle", "--config", "fig2.cfg", "--out", out]))
