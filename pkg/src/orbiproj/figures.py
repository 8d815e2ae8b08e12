"""Reference parameter sets for the tessellation pictures, keyed by figure name.

Each entry is a solve request plus the word-length depth at which it is drawn.
Where no fiber value is given for a deformable structure, fiber 0 is used.
"""

FIGURES = {
    "fig1": ({"type": "P2", "ends": [{"hyp": [1 / 3.1, 4.1]}, {"hyp": [1 / 4.1, 5.1]}, {"cone": 5}],
              "fiber": [2, 1]}, 4),
    "fig2": ({"type": "P2", "ends": [{"hyp": [1 / 2, 3]}, {"hyp": [1 / 4, 5]}, {"cone": 2}]}, 4),
    "fig3": ({"type": "P3", "ends": [{"hyp": [1 / 5, 6]}, {"cone": 3}, {"cone": 5}], "fiber": [1, 1]}, 4),
    "fig4": ({"type": "P3", "ends": [{"hyp": [1 / 3, 4]}, {"cone": 2}, {"cone": 7}]}, 4),
    "fig5": ({"type": "P4", "ends": [{"cone": 3}, {"cone": 5}, {"cone": 5}], "fiber": [2, 2]}, 4),
    "fig6": ({"type": "P4", "ends": [{"cone": 2}, {"cone": 5}, {"cone": 7}]}, 4),
    "fig7": ({"type": "A1", "ends": [{"hyp": [0.5, 5]}, {"full": 0.4}], "fiber": [0]}, 5),
    "fig8": ({"type": "A2", "ends": [{"hyp": [0.5, 5]}, {"corner": 3}], "fiber": [0]}, 5),
    "fig9": ({"type": "A2", "ends": [{"hyp": [0.5, 5]}, {"corner": 2}]}, 5),
    "fig15": ({"type": "A3", "ends": [{"cone": 5}, {"full": 0.3}], "fiber": [0]}, 4),
    "fig16": ({"type": "A4", "ends": [{"corner": 3}, {"cone": 5}], "fiber": [0]}, 6),
    "fig17": ({"type": "A4", "ends": [{"corner": 2}, {"cone": 5}]}, 6),
    "fig12": ({"type": "D1", "ends": [{"full": 0.2}, {"full": 0.4}, {"full": 0.3}], "fiber": [0]}, 5),
    "fig10": ({"type": "D2", "ends": [{"full": 0.4}, {"corner": 5}, {"full": 0.3}], "fiber": [0]}, 5),
    "fig11": ({"type": "D2", "ends": [{"full": 0.4}, {"corner": 2}, {"full": 0.3}]}, 5),
    "fig13": ({"type": "D3", "ends": [{"full": 0.15}, {"corner": 3}, {"corner": 5}], "fiber": [0]}, 5),
    "fig14": ({"type": "D3", "ends": [{"full": 0.15}, {"corner": 2}, {"corner": 3}]}, 4),
}
