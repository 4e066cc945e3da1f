from defect_regression.cli import app

app(prog_name="defect-regression")
