from .field_loader import load_field, parse_header
