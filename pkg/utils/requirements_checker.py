import logging
import os
from pathlib import Path

from utils.tsplib_handler import is_reserved

logger = logging.getLogger(__name__)


def check_requirements(instances, outputs=()):
    """Pre-flight a run: instance files readable, output directories writable"""
    logger.info("🔍 Checking requirements...")
    ok = True
    for spec in instances:
        if is_reserved(spec):
            logger.info(f"✅ Built-in instance {spec}")
            continue
        path = Path(spec)
        if not path.is_file():
            logger.error(f"❌ Missing instance file: {path}")
            ok = False
        elif not os.access(path, os.R_OK):
            logger.error(f"❌ Instance file not readable: {path}")
            ok = False
        else:
            logger.info(f"✅ {path} found")
    for out in outputs:
        if out is None:
            continue
        parent = Path(out).parent
        try:
            parent.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            logger.error(f"❌ Cannot create output directory {parent}: {e}")
            ok = False
            continue
        if not os.access(parent, os.W_OK):
            logger.error(f"❌ Output directory not writable: {parent}")
            ok = False
    return ok
