"""
Acceptance Matrix
Which checks run at which (n, p); the field degree is n so that regular vectors exist.
"""

# (n, p) -> checks, in the order the suite visits configurations
ACCEPTANCE_MATRIX = {
    (1, 2): ['der-inn', 'counterexample'],
    (1, 3): ['der-inn', 'centralizers', 'graded-vanishing', 'determining-pair'],
    (1, 5): ['der-inn', 'centralizers', 'graded-vanishing', 'determining-pair'],
    (1, 7): ['der-inn', 'graded-vanishing'],
    (2, 2): ['der-inn', 'script-d', 'centralizers', 'torus-cartan', 'determining-pair'],
    (2, 3): ['der-inn', 'script-d', 'centralizers', 'torus-cartan', 'graded-vanishing',
             'determining-pair', 'roots'],
    (3, 2): ['der-inn', 'script-d', 'centralizers', 'torus-cartan', 'determining-pair'],
    (2, 5): ['der-inn', 'script-d', 'centralizers', 'torus-cartan', 'graded-vanishing',
             'determining-pair', 'roots'],
}

# Configurations whose Der system has thousands of unknowns
SLOW_CONFIGURATIONS = {(2, 5)}


def suite_configurations(include_slow: bool = True):
    for (n, p), checks in ACCEPTANCE_MATRIX.items():
        if include_slow or (n, p) not in SLOW_CONFIGURATIONS:
            yield n, p, checks
