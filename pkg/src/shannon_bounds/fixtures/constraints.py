"""Textual facts about the modified Schläfli graph (27-lines graph plus an
apex vertex). Vertex names are the figure's 1-based labels "1".."28".

Only these facts are known about the figure; any labelling that satisfies
all of them is an acceptable fixture.
"""

APEX = "28"
CORE = tuple(str(i) for i in range(1, 28))
APEX_NEIGHBORS = ("1", "2", "3", "4", "5", "11", "12", "23", "27")

MAX_INDEPENDENT = ("8", "9", "13", "15", "19", "25", "28")

# neighbourhoods quoted for the two pivot vertices; N(17) is listed after
# the edge (6, 17) has already been removed
NEIGHBORS_6 = ("5", "13", "14", "17", "18", "21", "22", "25", "26", "27")
NEIGHBORS_17_WITHOUT_6 = ("1", "4", "7", "9", "12", "19", "20", "22", "24")

PIVOT_6_TARGETS = ("5", "17", "18", "21", "22", "27")
PIVOT_17_TARGETS = ("1", "4", "12", "22", "24")

DELETED_EDGES = (
    ("6", "5"), ("6", "17"), ("6", "18"), ("6", "21"), ("6", "22"), ("6", "27"),
    ("17", "1"), ("17", "4"), ("17", "12"), ("17", "22"), ("17", "24"),
)

RESIDUAL_INDEPENDENT = ("6", "12", "15", "16", "17", "18", "24", "27")

CORE_MINRANK = 7
