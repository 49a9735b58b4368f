"""
pytest 루트 설정
프로젝트 루트를 import 경로에 추가해 config, exceptions, src, cli 패키지를 바로 불러옵니다.
"""

import os
import sys

sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))
