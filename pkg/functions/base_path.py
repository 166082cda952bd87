import pathlib

# Project root, so fixture and output paths resolve the same from any working directory
base_path = pathlib.Path(__file__).resolve().parent.parent
