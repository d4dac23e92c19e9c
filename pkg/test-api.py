#!/usr/bin/env python3
"""
Smoke test for a running itfkit API
"""

import requests
import json
import sys

API_URL = "http://localhost:5000"
ANALYSIS_URL = f"{API_URL}/api/analysis"


def print_response(title, status_code, response_json):
    """Pretty print response"""
    print(f"\n{'='*50}")
    print(f"{title}")
    print(f"{'='*50}")
    print(f"Status Code: {status_code}")
    print(json.dumps(response_json, indent=2)[:2000])
    return status_code == 200


def test_health():
    """Test API health"""
    try:
        response = requests.get(f"{API_URL}/api/health")
        return print_response("Health Check", response.status_code, response.json())
    except Exception as e:
        print(f"Error: {e}")
        return False


def test_models():
    """List the bundled models"""
    try:
        response = requests.get(f"{ANALYSIS_URL}/models")
        if print_response("Bundled Models", response.status_code, response.json()):
            return response.json().get('models', [])
        return []
    except Exception as e:
        print(f"Error: {e}")
        return []


def test_validate(model):
    """Validate one bundled model"""
    try:
        response = requests.post(f"{ANALYSIS_URL}/validate", json={'model': model})
        success = print_response(f"Validate {model}", response.status_code, response.json())
        return success and response.json().get('valid')
    except Exception as e:
        print(f"Error: {e}")
        return False


def test_report(model):
    """Full report of one bundled model"""
    try:
        response = requests.post(f"{ANALYSIS_URL}/report", json={'model': model})
        data = response.json()
        kinds = {}
        for finding in data.get('findings', []):
            kinds[finding['kind']] = kinds.get(finding['kind'], 0) + 1
        return print_response(f"Report {model}", response.status_code, {'schema': data.get('schema'), 'findings': kinds})
    except Exception as e:
        print(f"Error: {e}")
        return False


def main():
    print("\n" + "="*50)
    print("ITFKIT API SMOKE TEST")
    print("="*50)

    print("\n[1/4] Testing API health...")
    if not test_health():
        print("\nBackend not responding. Make sure to run: python app.py")
        return False

    print("\n[2/4] Listing bundled models...")
    models = test_models()
    if not models:
        print("\nNo bundled models found. Check ITFKIT_MODELS_DIR.")
        return False

    print("\n[3/4] Validating models...")
    invalid = [model for model in models if not test_validate(model)]

    print("\n[4/4] Building reports...")
    for model in models:
        test_report(model)

    print("\n" + "="*50)
    if invalid:
        print(f"Invalid models: {', '.join(invalid)}")
        return False
    print("All models validated and reported!")
    return True


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
