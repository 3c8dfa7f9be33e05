Page({
  data: {
    phone: ""
  },
  onPhoneInput: function (e) {
    this.setData({ phone: e.detail.value });
  },
  submitForm: function () {
    var phone = this.data.phone;
    wx.setStorageSync("phone", phone);
    wx.request({
      url: "https://api.courier.example/order",
      data: phone
    });
  }
});
