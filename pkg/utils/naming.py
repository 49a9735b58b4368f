from src.metric.losses import LossVariant


def format_number(value: float) -> str:
    """1.2 → "1.2", 1.0 → "1", 0.5 → "0.5" (표기용 짧은 숫자)"""
    return f"{float(value):g}"


def cell_name(variant: LossVariant, margin: float) -> str:
    """
    비교 그리드 한 칸의 이름

    Args:
        variant: 손실 종류
        margin: α

    Returns:
        str: 예) "DCA-BH-1.2", "TRI-BA-0.5"
    """
    return f"{LossVariant(variant).display_name}-{format_number(margin)}"
