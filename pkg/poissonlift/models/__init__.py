"""
Data types: charts, multivectors, verdicts, Poisson tensors and problem documents
"""
