from . import gen, lambda_cmd, reconstruct, report, spectrum

COMMANDS = {module.NAME: module for module in (gen, spectrum, lambda_cmd, reconstruct, report)}

__all__ = ["COMMANDS"]
