"""
pcat 패키지용 커스텀 예외 클래스들
"""

class PcatError(Exception):
    """pcat 패키지의 기본 예외 클래스"""
    pass

class PcatConfigurationError(PcatError):
    """잘못된 파라미터, 플래그, 설정 파일 값인 경우 발생하는 예외"""
    pass

class PcatDomainError(PcatError):
    """물리적 전제조건(|v| < 1, W > 0, 0이 아닌 방향 등)을 위반한 경우 발생하는 예외"""
    pass

class DegenerateDirectionError(PcatDomainError):
    """ê_x 또는 ê_y 정규화 분모가 0에 가까운 방향에서 발생하는 예외"""
    pass

class QuadratureError(PcatError):
    """적분 피적분함수가 NaN/inf를 반환한 경우 발생하는 예외"""
    pass

class ConvergenceError(QuadratureError):
    """노드 배가 후에도 목표 오차에 도달하지 못한 경우 발생하는 예외"""
    pass

class ConsistencyError(PcatError):
    """내부 수치 검증(허수부, 측도 비율, 상태 노름)이 실패한 경우 발생하는 예외"""
    pass

class CancellationError(PcatError):
    """ΔF 계산에서 적분 오차가 차이값에 비해 너무 커서 결과를 낼 수 없는 경우 발생하는 예외"""
    pass
