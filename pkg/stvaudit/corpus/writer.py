"""
Result writers. Payloads carry no timestamps, so identical inputs give
byte-identical files.
"""

import csv
import io
import json
import logging
import os

logger = logging.getLogger(__name__)


def csv_text(header: list[str], rows: list[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def json_text(document) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def write_text(path: str, text: str):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    logger.debug("Wrote %s", path)


def write_csv(path: str, header: list[str], rows: list[list]):
    write_text(path, csv_text(header, rows))


def write_json(path: str, document):
    write_text(path, json_text(document))
