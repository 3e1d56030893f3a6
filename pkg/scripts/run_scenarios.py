import os
import sys
import argparse
from pathlib import Path

# 添加项目根目录到 sys.path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.append(project_root)

from holobrack.cli import CSV_SCENARIOS, EXIT_ERROR, SCENARIOS, main
from loguru import logger


def main_all():
    parser = argparse.ArgumentParser(description="用同一组参数运行全部场景")
    parser.add_argument("--out-dir", type=Path, default=Path("out"), help="输出目录")
    parser.add_argument("--config", type=Path, help="JSON 配置文件")
    args, extra = parser.parse_known_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for scenario in SCENARIOS:
        suffix = ".csv" if scenario in CSV_SCENARIOS else ".json"
        argv = [scenario, "--out", str(args.out_dir / f"{scenario}{suffix}")]
        if args.config is not None:
            argv += ["--config", str(args.config)]
        code = main(argv + extra)
        if code:
            logger.warning(f"场景 {scenario} 退出码 {code}")
        worst = max(worst, code)

    if worst == EXIT_ERROR:
        logger.error("有场景因配置或领域错误中止")
    logger.info(f"全部场景完成，结果位于 {args.out_dir}")
    return worst


if __name__ == "__main__":
    sys.exit(main_all())
