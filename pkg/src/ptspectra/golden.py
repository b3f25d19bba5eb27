"""Reference values for V = i x^3 (alpha = 1), stored as strings so the
number of stated digits is kept.

``None`` marks a blank cell in the reference table.
"""

TABLE1_LADDER = {
    10: ("1.156101684", "3.73083496", None, None),
    15: ("1.156038818", "4.14942907", None, None),
    20: ("1.156383056", "4.109441589", None, None),
    25: ("1.156258544", "4.109537412", "7.553497517", None),
    30: ("1.156267013", "4.109170441", "7.562399797", "11.24884001"),
    35: ("1.156266986", "4.109228991", "7.562011977", "11.31452225"),
    40: ("1.156267082", "4.109228365", "7.562284307", "11.31372188"),
    45: ("1.156267072", "4.109228831", "7.562273020", "11.31452360"),
    50: ("1.156267072", "4.109228753", "7.562274330", "11.31442188"),
    55: (None, "4.109228754", "7.562273854", "11.31442413"),
    60: (None, "4.109228753", "7.562273860", "11.31442176"),
    65: (None, "4.109228753", "7.562273854", "11.31442184"),
    70: (None, "4.109228753", "7.562273855", "11.31442182"),
    75: (None, None, "7.562273855", "11.31442182"),
    80: (None, None, None, "11.31442182"),
}

TABLE1_RK = ("1.156267072", "4.109228752", "7.562273854", "11.314421818")
TABLE1_WKB = ("1.0943", "4.0895", "7.5489", "11.3043")

# relative tolerances per ladder row; WKB cells are compared after rounding
LADDER_TOL_CONVERGED = 1e-8  # M >= 50
LADDER_TOL_EARLY = 1e-5  # M < 50
RK_TOL = 1e-8


def ladder_tolerance(M: int) -> float:
    return LADDER_TOL_CONVERGED if M >= 50 else LADDER_TOL_EARLY


def printed_decimals(text: str) -> int:
    return len(text.split(".")[1]) if "." in text else 0
