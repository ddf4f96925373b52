import unittest

from pydantic import ValidationError

from donormatch.donor import NEVER_DONATED_DAYS, BloodType, DonorRecord


VALID = {
    "id": "d1",
    "name": "Erikson",
    "blood_type": "A+",
    "age": 38,
    "weight_kg": 70,
    "distance_m": 1302,
    "days_since_donation": 270,
    "phone": "0812",
}


class Test_BloodType(unittest.TestCase):
    def test_parse_spellings(self):
        self.assertIs(BloodType.parse("A+"), BloodType.A_POS)
        self.assertIs(BloodType.parse(" ab- "), BloodType.AB_NEG)
        self.assertIs(BloodType.parse("O−"), BloodType.O_NEG)
        self.assertIs(BloodType.parse("B Rh+"), BloodType.B_POS)

    def test_parse_unknown(self):
        with self.assertRaises(ValueError):
            _ = BloodType.parse("C+")


class Test_DonorRecord(unittest.TestCase):
    def test_valid_record(self):
        record = DonorRecord.model_validate(VALID)
        self.assertEqual(record.blood_type, BloodType.A_POS)
        self.assertTrue(record.has_donated)
        self.assertEqual(record.fuzzy_attributes(), {"age": 38.0, "distance": 1302.0, "time": 270.0})

    def test_never_donated(self):
        record = DonorRecord.model_validate({**VALID, "days_since_donation": None})
        self.assertFalse(record.has_donated)
        self.assertEqual(record.fuzzy_attributes()["time"], float(NEVER_DONATED_DAYS))
        self.assertEqual(record.fuzzy_attributes(never_donated_days=90)["time"], 90.0)

    def test_id_is_stripped(self):
        self.assertEqual(DonorRecord.model_validate({**VALID, "id": "  d1 "}).id, "d1")

    def test_invalid_fields(self):
        for field, value in (
            ("id", "   "),
            ("blood_type", "Z"),
            ("age", -1),
            ("age", "old"),
            ("weight_kg", 0),
            ("distance_m", -5),
            ("distance_m", float("nan")),
            ("days_since_donation", -1),
        ):
            with self.subTest(field=field, value=value):
                with self.assertRaises(ValidationError):
                    _ = DonorRecord.model_validate({**VALID, field: value})

    def test_unknown_field_rejected(self):
        with self.assertRaises(ValidationError):
            _ = DonorRecord.model_validate({**VALID, "height": 170})

    def test_frozen(self):
        record = DonorRecord.model_validate(VALID)
        with self.assertRaises(ValidationError):
            record.age = 40 # pyright: ignore[reportAttributeAccessIssue]

    def test_json_round_trip(self):
        record = DonorRecord.model_validate(VALID)
        self.assertEqual(DonorRecord.model_validate_json(record.model_dump_json()), record)
