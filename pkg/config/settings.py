import os

from dotenv import load_dotenv

# 로컬 개발 환경이면 .env 로드
if os.getenv("DCA_ENV", "local") == "local":
    load_dotenv(override=False)


class Settings:
    def __init__(self):
        # 환경 정보
        self.env = os.getenv("DCA_ENV", "local")
        self.debug = self.env == "local"

        # 경로 설정
        self.BASE_DIR = os.path.dirname(os.path.abspath(__file__))  # config/
        self.ROOT_DIR = os.path.abspath(os.path.join(self.BASE_DIR, ".."))
        self.output_dir = os.getenv("DCA_OUTPUT_DIR", "outputs")

        # 로깅 설정
        self.log_level = os.getenv("DCA_LOG_LEVEL", "INFO").upper()
        self.log_config_path = os.getenv(
            "DCA_LOG_CONFIG", os.path.join(self.ROOT_DIR, "log_config.yaml")
        )

        # 병렬 처리 (compare grid, finite difference)
        self.n_jobs = int(os.getenv("DCA_N_JOBS", "1"))


settings = Settings()
