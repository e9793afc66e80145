"""Parses an SVG file with a strict XML parser and checks its root element."""
import sys
import xml.etree.ElementTree as ET

root = ET.parse(sys.argv[1]).getroot()
if root.tag != "{http://www.w3.org/2000/svg}svg":
    sys.exit(f"unexpected root element {root.tag}")
if root.get("width") != "800" or root.get("height") != "800":
    sys.exit("canvas is not 800x800")
polygons = root.findall("{http://www.w3.org/2000/svg}polygon")
if len(polygons) != int(sys.argv[2]):
    sys.exit(f"expected {sys.argv[2]} polygons, found {len(polygons)}")
print("ok")
